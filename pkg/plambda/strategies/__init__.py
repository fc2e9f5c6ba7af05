from .base import *
from .cbn import CallByName
from .cbv import CallByValue
from .registry import *
