# standard library imports
import sys

# local imports
from sentipulse.cli import main

sys.exit(main())
