"""Hot optimization kernels, compiled when available.

The Cython extension ``_ckernels`` is preferred; the pure-Python module
``_kernels_py`` implements the same functions and is used otherwise.
``BACKEND`` names the implementation in use.
"""
try:
    from ._ckernels import (BACKEND, chsh_value, maximize_chsh, maximize_pout,
                            pout_value, su2)
except ImportError:  # extension not built
    from ._kernels_py import (BACKEND, chsh_value, maximize_chsh, maximize_pout,
                              pout_value, su2)

__all__ = ["BACKEND", "chsh_value", "maximize_chsh", "maximize_pout", "pout_value", "su2"]
