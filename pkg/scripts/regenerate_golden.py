#!/usr/bin/env python3
"""Rebuild the packaged golden files under src/discjet/golden/.

Run after a deliberate serialization-format change, then inspect the diff;
the selftest criterion `golden-coproduct` compares against these bytes.
"""

import pathlib

from discjet.jsonio import coproduct_document, render

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "src" / "discjet" / "golden"


def main():
    GOLDEN.mkdir(exist_ok=True)
    path = GOLDEN / "coproduct_n1_c4.json"
    path.write_text(render(coproduct_document(1, 4)), encoding="utf-8")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
