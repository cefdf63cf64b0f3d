"""Complex Hermite polynomials and Segal-Bargmann type transforms, with numerical identity checks."""

__version__ = "0.1.0"
