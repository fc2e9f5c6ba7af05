from .contexts import *
from .env import NamedEnv
from .parser import *
from .printer import print_term
from .terms import *
