# module imports
from sentipulse.sentiment import engine
