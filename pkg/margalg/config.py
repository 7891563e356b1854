import os


class Config:
    DEFAULT_BUDGET = int(os.getenv("MARGALG_BUDGET", "1000000"))
    VERIFY_BUDGET = int(os.getenv("MARGALG_VERIFY_BUDGET", "50000000"))
    MAX_EXPONENT = int(os.getenv("MARGALG_MAX_EXPONENT", str(2**31 - 1)))
    CANDIDATE_FACET_CAP = int(os.getenv("MARGALG_FACET_CAP", "8"))
    JACOBIAN_SAMPLE_MAX = int(os.getenv("MARGALG_JACOBIAN_MAX", "13"))
    VERIFY_WORKERS = int(os.getenv("MARGALG_VERIFY_WORKERS", "1"))
    LOG_LEVEL = os.getenv("MARGALG_LOG_LEVEL", "WARNING")
    MAX_JOB_AGE_HOURS = float(os.getenv("MAX_JOB_AGE_HOURS", "24"))
    HOST = os.getenv("HOST", "0.0.0.0")
    PORT = int(os.getenv("PORT", "4041"))

    # Seeded kernel combinations draw from these (zero excluded)
    KERNEL_COEFFICIENTS = [-3, -2, -1, 1, 2, 3]
    TERM_ORDERS = ["grevlex", "lex"]
