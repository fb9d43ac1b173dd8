# module imports
from sentipulse.panel import builder
from sentipulse.panel import correlation
