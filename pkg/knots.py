#!/usr/bin/env python3
"""
Torus knot invariants from the command line.

    python knots.py kashaev -m 2 -p 3 -k 100
    python knots.py verify-lemma2 -m 2 -p 3 -k 21 --phi 0.5236
"""

from app.cli import main

if __name__ == "__main__":
    main()
