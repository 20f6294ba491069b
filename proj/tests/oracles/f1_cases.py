#!/usr/bin/env python3
"""Triple-F1 oracle: multiset exact matching computed from first principles.

Prints precision/recall/F1 for a set of hand-picked cases plus an exhaustive
sweep over every pair of predicted/reference multisets drawn from a tiny
triple universe (sizes up to 4 on the reference, 4 on the prediction). The
exhaustive sweep is summarised by a checksum so the C++ test can mirror the
same enumeration and compare totals.
"""
import itertools
from collections import Counter


def f1(predicted, reference):
    p, r = Counter(predicted), Counter(reference)
    matched = sum((p & r).values())
    if not predicted and not reference:
        return 1.0, 1.0, 1.0
    prec = matched / len(predicted) if predicted else 0.0
    rec = matched / len(reference) if reference else 0.0
    score = 0.0 if prec + rec == 0 else 2 * prec * rec / (prec + rec)
    return prec, rec, score


CASES = [
    ("exact", ["ab", "cd", "ef"], ["ab", "cd", "ef"]),
    ("two_of_three_plus_spurious", ["ab", "cd", "xx"], ["ab", "cd", "ef"]),
    ("all_wrong", ["xx", "yy"], ["ab", "cd"]),
    ("both_empty", [], []),
    ("empty_prediction", [], ["ab"]),
    ("duplicate_prediction", ["ab", "ab"], ["ab"]),
    ("duplicate_reference", ["ab"], ["ab", "ab"]),
    ("subset", ["ab"], ["ab", "cd", "ef", "gh"]),
]
for name, pred, ref in CASES:
    prec, rec, score = f1(pred, ref)
    print(f"{name}: precision={prec:.6f} recall={rec:.6f} f1={score:.6f}")

# Exhaustive sweep: universe of 3 triples, multisets up to size 4 on each
# side, enumerated in lexicographic order of (prediction, reference).
universe = ["t0", "t1", "t2"]
multisets = [list(c) for n in range(5)
             for c in itertools.combinations_with_replacement(universe, n)]
total = count = 0.0
for pred in multisets:
    for ref in multisets:
        total += f1(pred, ref)[2]
        count += 1
print(f"exhaustive: pairs={int(count)} f1_sum={total:.6f}")
