"""Polyomino ideals of closed paths: Gröbner bases, flag complexes, shellings and rook polynomials."""

from polyalg.grid import Cell, Interval, Point, Polyomino, parse_polyomino

__all__ = ["Cell", "Interval", "Point", "Polyomino", "parse_polyomino"]
__version__ = "0.1.0"
