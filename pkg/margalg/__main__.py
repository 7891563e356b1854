import sys

from dotenv import load_dotenv
load_dotenv()

from margalg.cli import main

sys.exit(main())
