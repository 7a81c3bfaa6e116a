"""Runs the `immersa` command with `python -m immersa`."""
from __future__ import annotations

import sys

from .cli import main

sys.exit(main())
