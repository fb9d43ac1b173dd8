# module imports
from sentipulse.inference.var import model
from sentipulse.inference.var import analysis
