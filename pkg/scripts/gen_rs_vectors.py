"""Regenerate tests/fixtures/rs_vectors.json from the current encoder.

Run only when the framing or lane layout changes intentionally; the frozen
file is the compatibility contract for encoded symbols.
"""

from __future__ import annotations

import json
import pathlib
import random

from halfba.rs import rs_encode
from halfba.values import BOT, Bits

CASES = [
    (BOT, 3, 1, 1),
    (Bits(1, 1), 4, 2, 1),
    (Bits(24, 0xABCDEF), 1, 1, 0),
    (Bits(96, 0x0123456789ABCDEF01234567), 7, 3, 2),
    (Bits(64, 0xDEADBEEFCAFEF00D), 10, 2, 4),
    (Bits(200, (1 << 199) | 0x5A5A5A), 9, 5, 2),
    (Bits.random(random.Random(2026), 333), 13, 4, 4),
]


def main() -> None:
    out = []
    for payload, n, k, r in CASES:
        cw = rs_encode(payload, n, k)
        out.append(
            {
                "length": payload.length,
                "value_hex": format(payload.value, "x") if payload.length else "",
                "num_symbols": n,
                "k": k,
                "r": r,
                "symbols": [{"index": s.index, "data_hex": s.data.hex()} for s in cw.symbols],
            }
        )
    path = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "rs_vectors.json"
    path.parent.mkdir(exist_ok=True)
    path.write_text(json.dumps(out, indent=1) + "\n")
    print(f"wrote {len(out)} cases to {path}")


if __name__ == "__main__":
    main()
