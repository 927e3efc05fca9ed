import os
from fractions import Fraction

# Application settings
APP_NAME = "twoassoc"
APP_VERSION = "0.1.0"

# Interchange file format
FORMAT_VERSION = 1
FILE_MAGIC = "twoassoc-flowcat"

# Default bounds for desk-scale categories
DEFAULT_CAP = Fraction(3)
DEFAULT_EPSILON = Fraction(1)
DEFAULT_SHAPE_MAX = (2, 2, 3)

# Generator families need room for the descriptors of their equation classes
ASSOC_SHAPE_MAX = (1, 2, 4)
STRICT_SHAPE_MAX = (2, 4, 4)
STRUCTURE_ENERGY = Fraction(1)

# Associativity checks walk chains up to this codimension
ASSOC_MAX_CODIM = 3

# Largest basis accepted for random square-zero instances
MAX_RANDOM_BASIS = 8

# Logging
LOG_FORMAT = "%(asctime)s %(name)s [%(levelname)s] %(message)s"
LOG_LEVEL = os.environ.get('TWOASSOC_LOG_LEVEL', 'WARNING')

# Debug settings
DEBUG = os.environ.get('TWOASSOC_DEBUG', '0') == '1'
