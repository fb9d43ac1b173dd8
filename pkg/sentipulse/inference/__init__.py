# module imports
from sentipulse.inference import forecaster

# subpackage imports
from sentipulse.inference import arima
from sentipulse.inference import var
