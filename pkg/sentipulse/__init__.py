# this is the only place to define the package version; it is currently used by
# setup.cfg, docs/conf.py and by the method print_sentipulse_header in subroutines.py
__version__ = "0.1.0"
