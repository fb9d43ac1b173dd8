# module imports
from sentipulse.evaluation import backtest
