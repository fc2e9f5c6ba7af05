from .base import *
from .registry import *
from .terms import *
from .chains import *
from .relation import *
