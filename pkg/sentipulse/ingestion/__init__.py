# module imports
from sentipulse.ingestion import calendar
from sentipulse.ingestion import parsers
from sentipulse.ingestion import store
