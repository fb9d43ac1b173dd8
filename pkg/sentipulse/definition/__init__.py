# module imports
from sentipulse.definition import lexicon
from sentipulse.definition import records
from sentipulse.definition import panel
from sentipulse.definition import split
