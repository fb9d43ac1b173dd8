# module imports
from sentipulse.inference.arima import statespace
from sentipulse.inference.arima import model
from sentipulse.inference.arima import selection
