import threading
import uuid
from datetime import datetime, timedelta
from flask import Blueprint, jsonify, request
from margalg import checks
from margalg.complexes import FaceSet, parse_facets
from margalg.config import Config
from margalg.errors import BudgetExceeded, MargalgError
from margalg.groebner import StepBudget
from margalg.ideals import i_delta_gens, j_delta_gens, k_delta_gens, l_gens, q_delta_gens, segre_margin_gens
from margalg.primes import minimal_prime_candidates
from margalg.tables import Shape, Table, decompose, detect_complex, marginalize

main_bp = Blueprint("main", __name__)

# In-memory verify job tracking
verify_jobs = {}


def cleanup_old_jobs():
    """Remove jobs older than MAX_JOB_AGE_HOURS."""
    cutoff = datetime.utcnow() - timedelta(hours=Config.MAX_JOB_AGE_HOURS)
    old_jobs = [job_id for job_id, job in verify_jobs.items()
                if job.get("created_at", datetime.utcnow()) < cutoff]
    for job_id in old_jobs:
        del verify_jobs[job_id]


@main_bp.errorhandler(BudgetExceeded)
def handle_budget(e):
    return jsonify({"error": str(e), "steps": e.steps}), 422


@main_bp.errorhandler(MargalgError)
@main_bp.errorhandler(ValueError)
def handle_domain_error(e):
    return jsonify({"error": str(e)}), 400


def _body() -> dict:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise MargalgError("Request body must be a JSON object")
    return data


def _shape_and_complex(data):
    try:
        shape = Shape.of(data["shape"])
        complex_ = parse_facets(data["facets"], shape.n) if "facets" in data else None
    except (KeyError, TypeError, ValueError) as e:
        raise MargalgError(f"Invalid shape or facets: {e}") from e
    return shape, complex_


@main_bp.route("/health")
def health():
    return jsonify({"status": "healthy", "checks": len(checks.registered_checks())})


@main_bp.route("/api/margins", methods=["POST"])
def margins():
    data = _body()
    table = Table.from_dict(data.get("table") or {})
    face = FaceSet.of(data.get("face", []))
    return jsonify(marginalize(table, face).to_dict())


@main_bp.route("/api/decompose", methods=["POST"])
def decompose_table():
    data = _body()
    table = Table.from_dict(data.get("table") or {})
    independent, zero_part = decompose(table, strict=bool(data.get("strict", False)))
    return jsonify({"independent": independent.to_dict(), "zero_margin": zero_part.to_dict()})


@main_bp.route("/api/detect", methods=["POST"])
def detect():
    data = _body()
    table = Table.from_dict(data.get("table") or {})
    return jsonify(detect_complex(table, strict=bool(data.get("strict", False))).to_dict())


@main_bp.route("/api/gens", methods=["POST"])
def gens():
    data = _body()
    shape, complex_ = _shape_and_complex(data)
    kind = data.get("kind")
    face = FaceSet.of(data.get("face", []))
    if kind == "Segre":
        return jsonify(segre_margin_gens(shape, face).to_dict())
    if kind == "L":
        return jsonify(l_gens(shape, face).to_dict())
    if complex_ is None:
        return jsonify({"error": f"facets are required for {kind}"}), 400
    if kind == "I_Delta":
        return jsonify(i_delta_gens(shape, complex_).to_dict())
    if kind == "K_Delta":
        spec, counts = k_delta_gens(shape, complex_, facets_only=bool(data.get("facets_only", False)))
        result = spec.to_dict()
        result["counts"] = counts.to_dict()
        return jsonify(result)
    if kind == "J_Delta":
        return jsonify(j_delta_gens(shape, complex_).to_dict())
    if kind == "Q_Delta":
        budget = StepBudget(data.get("budget"))
        return jsonify(q_delta_gens(shape, complex_, degree_cap=data.get("degree_cap"), budget=budget).to_dict())
    return jsonify({"error": f"Unknown ideal kind: {kind}"}), 400


@main_bp.route("/api/min-primes", methods=["POST"])
def min_primes():
    data = _body()
    shape, complex_ = _shape_and_complex(data)
    if complex_ is None:
        return jsonify({"error": "facets are required"}), 400
    descriptors = minimal_prime_candidates(shape, complex_)
    return jsonify({
        "components": [dict(d.to_dict(), label=d.label(complex_)) for d in descriptors]
    })


@main_bp.route("/api/verify", methods=["POST"])
def start_verify():
    # Cleanup old jobs to prevent memory leak
    cleanup_old_jobs()

    data = _body()
    check_id = data.get("check")
    run_everything = bool(data.get("all", False))
    if not run_everything and check_id not in checks.registered_checks():
        return jsonify({"error": f"Unknown check: {check_id}"}), 400
    try:
        seed = int(data.get("seed", 0))
        budget = int(data["budget"]) if data.get("budget") is not None else None
    except (ValueError, TypeError):
        return jsonify({"error": "Invalid seed or budget"}), 400

    job_id = str(uuid.uuid4())
    verify_jobs[job_id] = {
        "status": "processing",
        "reports": [],
        "error": None,
        "created_at": datetime.utcnow()
    }

    # Run checks in background
    def run_checks():
        try:
            if run_everything:
                reports = checks.run_all(budget, seed)
            else:
                reports = [checks.run_check(check_id, budget, seed)]
            verify_jobs[job_id]["reports"] = [r.to_dict() for r in reports]
            verify_jobs[job_id]["status"] = "completed"
        except Exception as e:
            verify_jobs[job_id]["status"] = "failed"
            verify_jobs[job_id]["error"] = f"Unexpected error: {str(e)}"

    thread = threading.Thread(target=run_checks)
    thread.start()

    return jsonify({"job_id": job_id})


@main_bp.route("/api/status/<job_id>")
def get_status(job_id):
    if job_id not in verify_jobs:
        return jsonify({"error": "Job not found"}), 404

    job = verify_jobs[job_id]
    return jsonify({
        "status": job["status"],
        "reports": job["reports"],
        "error": job["error"]
    })
