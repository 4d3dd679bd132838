#!/usr/bin/env python3
"""
toricw - launcher z katalogu głównego
Uruchamia CLI z pakietu src/ bez instalacji
"""

import os
import sys

# Add current directory to path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
