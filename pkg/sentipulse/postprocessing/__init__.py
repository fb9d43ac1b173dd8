# module imports
from sentipulse.postprocessing import reports
