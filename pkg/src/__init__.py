"""ecdlab: efficient closed domination in digraphs and their products"""

__version__ = "1.0.0"
