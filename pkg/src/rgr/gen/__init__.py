"""Instance generators with witness labelings and structural certificates."""
from .base import GeneratedInstance
from .book import gen_book
from .cnf import CnfError, CnfFormula, parse_assignment, parse_dimacs
from .dsat import gen_sat_directed
from .sat3 import gen_sat_trianglefree
from .setcover import SetCoverError, SetCoverInstance, gen_setcover

__all__ = ["CnfError", "CnfFormula", "GeneratedInstance", "SetCoverError", "SetCoverInstance",
           "gen_book", "gen_sat_directed", "gen_sat_trianglefree", "gen_setcover",
           "parse_assignment", "parse_dimacs"]
