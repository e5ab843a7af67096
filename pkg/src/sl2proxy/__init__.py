"""Black-box constructive recognition of SL2, PSL2 and PGL2 over odd-characteristic fields."""

from .bbfield import BlackBoxField, NotSquare
from .bbgroup import BlackBoxGroup, CenterQuotientView
from .recognition import (ProxyPair, build_pgl2_proxy, build_psl2_proxy, build_sl2_proxy,
                          transvection_decompose)

__all__ = [
    "BlackBoxField", "BlackBoxGroup", "CenterQuotientView", "NotSquare", "ProxyPair",
    "build_pgl2_proxy", "build_psl2_proxy", "build_sl2_proxy", "transvection_decompose",
]
__version__ = "0.1.0"
