"""Word-coded networks modelled on the Sierpinski gasket."""

__version__ = "0.1.0"
