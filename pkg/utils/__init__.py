from .errors import HMatrixError, DomainError, ContractError, NumericalError, ConfigError
from .counters import OpCounters, COUNTER_NAMES
from .registry import Registry
from .yaml_utils import load_config_file, override_from_args
