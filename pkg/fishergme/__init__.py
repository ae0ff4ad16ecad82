from fishergme.utils import *
from fishergme.tensor_core import *
from fishergme.operators import *
from fishergme.qfi import *
from fishergme.states import *
from fishergme.criteria import *
from fishergme.scans import *
from fishergme.save_and_load import *
