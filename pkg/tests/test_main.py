"""Main file for unit tests."""

from __future__ import annotations

import immersa


def test_immersa() -> None:
    assert immersa.__version__
    for name in immersa.__all__:
        assert hasattr(immersa, name)
    return

if __name__ == '__main__':
    test_immersa()
