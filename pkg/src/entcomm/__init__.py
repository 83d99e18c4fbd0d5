from . import classical, discrimination, protocols, qcore, search, tasks, transforms
from .config import logger
from .errors import EntcommError

__version__ = "0.1.0"
