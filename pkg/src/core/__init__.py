# Core simulator module
from .settings import ScenarioConfig, OperatorSpec, get_preset
from .errors import SimulationError
from .constants import *
