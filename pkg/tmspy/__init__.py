# -*- coding: utf-8 -*-

""" TMSPy: finite-time dephasing of two-mode squeezed microwaves. """

__version__ = '0.1.0'

from tmspy import (  # noqa: E402
    config,
    messages,
    utils,
    cat,
    symplectic,
    gaussian,
    jpa,
    dephasing,
    protocols,
    estimation,
    simulation,
    cli,
)
