"""halfba: error-free synchronous Byzantine agreement by recursive halving.

The protocol stack, bottom up:

- gf16 / rs: Reed-Solomon codes over GF(2^16) with unique decoding;
- reduce_cool: four-round value reduction to coded symbols plus a vote;
- binary_gc: two-round graded consensus on one bit;
- graded_consensus: eight-round graded consensus on long values;
- committee: two-round committee dissemination of an agreed value;
- halving: the recursive agreement protocol tying the pieces together;
- engine / faults / metrics: deterministic lock-step simulator, Byzantine
  strategies, and exact bit/round accounting;
- cli: command line entry points (run, sweep, oracle).
"""

from .values import BOT, Bits, validator

__all__ = ["BOT", "Bits", "validator"]
__version__ = "0.1.0"
