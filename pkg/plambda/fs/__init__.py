from .sums import *
from .reduction import *
from .relation import *
from .base import *
from .registry import *
from .checkers import *
