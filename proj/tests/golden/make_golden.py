#!/usr/bin/env python3
"""Regenerate the frozen reference values used by the C++ tests.

Everything here is computed from definitions with Python integers and
fractions, independently of the C++ library:

  rng_reference.txt       first outputs of a few streams (xoshiro256** seeded
                          through SplitMix64, as documented in rng.hpp)
  uniform_rationals.txt   P(property) under the uniform model C(n,m) as exact
                          rationals, by enumerating every composition
"""
import itertools
import json
import os
from fractions import Fraction

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & MASK


class Stream:
    def __init__(self, seed, index):
        self.seed, self.index = seed, index
        key = mix64(mix64(seed) ^ ((index * GOLDEN) & MASK))
        self.s = []
        for _ in range(4):
            key = (key + GOLDEN) & MASK
            self.s.append(mix64(key))

    def substream(self, i):
        return Stream(mix64(self.seed ^ mix64((self.index + GOLDEN) & MASK)), i)

    def next(self):
        s = self.s
        result = (rotl((s[1] * 5) & MASK, 7) * 9) & MASK
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
        return result


def compositions(n, m):
    # Stars and bars: choose n-1 bar slots among m+n-1.
    for bars in itertools.combinations(range(m + n - 1), n - 1):
        prev, out = -1, []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(m + n - 1 - prev - 1)
        yield out


def runs(c, pred):
    out, cur = [], 0
    for v in c:
        if pred(v):
            cur += 1
        elif cur:
            out.append(cur)
            cur = 0
    if cur:
        out.append(cur)
    return out


def windows(c, k):
    return [c[i:i + k] for i in range(len(c) - k + 1)]


def sign(a, b):
    return (a > b) - (a < b)


def occurs(c, kind, blocks, strict):
    flat = [t for b in blocks for t in b]
    k = len(flat)
    starts = [j == 0 for b in blocks for j in range(len(b))]
    singletons = len(blocks) > 1 and all(len(b) == 1 for b in blocks)
    for idx in itertools.combinations(range(len(c)), k):
        ok = True
        for a in range(1, k):
            if not starts[a] and idx[a] != idx[a - 1] + 1:
                ok = False
            if starts[a] and strict and not singletons and idx[a] < idx[a - 1] + 2:
                ok = False
        if not ok:
            continue
        vals = [c[i] for i in idx]
        if kind == 'e':
            ok = vals == flat
        elif kind == 'u':
            ok = all(v >= t for v, t in zip(vals, flat))
        elif kind == 'l':
            ok = all(v <= t for v, t in zip(vals, flat))
        else:
            ok = all(sign(vals[a], vals[b]) == sign(flat[a], flat[b]) for a in range(k) for b in range(k))
        if ok:
            return True
    return False


def parse_pattern(text):
    kind, body = text.split(':', 1)
    blocks, i = [], 0
    while i < len(body):
        if body[i] == '[':
            j = body.index(']', i)
            blocks.append([int(x) for x in body[i + 1:j].split(',')])
            i = j + 1
        else:
            j = body.find(',', i)
            j = len(body) if j < 0 else j
            blocks.append([int(body[i:j])])
            i = j
        if i < len(body) and body[i] == ',':
            i += 1
    return kind, blocks


def holds(prop, c):
    pid = prop.get('id')
    k = prop.get('k', 0)
    r = prop.get('r', 0)
    comps = runs(c, lambda v: v != 0)
    gaps = runs(c, lambda v: v == 0)
    if 'pattern' in prop and pid is None:
        kind, blocks = parse_pattern(prop['pattern'])
        value = occurs(c, kind, blocks, prop.get('gap') == 'strict')
    elif pid == 'cmax_ge':
        value = any(x >= k for x in comps)
    elif pid == 'gmax_ge':
        value = any(x >= k for x in gaps)
    elif pid == 'cmin_gt':
        value = all(x > k for x in comps)
    elif pid == 'gmin_gt':
        value = all(x > k for x in gaps)
    elif pid == 'tmax_ge':
        value = max(c) >= r
    elif pid == 'tmin_ge':
        value = min(c) >= r
    elif pid == 'equal_run':
        value = any(w[0] != 0 and len(set(w)) == 1 for w in windows(c, k))
    elif pid == 'equal_run_any':
        value = any(len(set(w)) == 1 for w in windows(c, k))
    elif pid == 'carlitz':
        value = all(a != b for a, b in zip(c, c[1:]))
    elif pid == 'equal_terms':
        value = any(c.count(v) >= k for v in c)
    elif pid == 'increasing_run':
        value = any(all(a < b for a, b in zip(w, w[1:])) for w in windows(c, k))
    elif pid == 'square':
        value = any(all(v == k for v in w) for w in windows(c, k))
    else:
        raise ValueError(pid)
    return value != prop.get('negate', False)


CASES = [
    ({"id": "cmax_ge", "k": 2}, 4, 3),
    ({"id": "cmax_ge", "k": 3}, 6, 5),
    ({"id": "gmax_ge", "k": 2}, 5, 4),
    ({"id": "cmin_gt", "k": 1}, 6, 4),
    ({"id": "gmin_gt", "k": 1}, 5, 6),
    ({"id": "tmax_ge", "r": 3}, 5, 6),
    ({"id": "tmin_ge", "r": 1}, 4, 7),
    ({"id": "equal_run", "k": 2}, 5, 5),
    ({"id": "equal_run_any", "k": 3}, 6, 4),
    ({"id": "carlitz"}, 5, 5),
    ({"id": "equal_terms", "k": 3}, 5, 4),
    ({"id": "increasing_run", "k": 3}, 6, 5),
    ({"id": "square", "k": 2}, 6, 6),
    ({"pattern": "e:[2,0,2]"}, 6, 5),
    ({"pattern": "u:[1,1]"}, 7, 3),
    ({"pattern": "l:[0,1,0]"}, 5, 6),
    ({"pattern": "o:[0,2,1,1]"}, 6, 6),
    ({"pattern": "e:[1,2],1", "gap": "strict"}, 6, 5),
    ({"pattern": "o:1,0,2"}, 5, 5),
    ({"id": "cmax_ge", "k": 2, "negate": True}, 8, 3),
]


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    with open(os.path.join(here, 'rng_reference.txt'), 'w') as f:
        f.write('# seed stream substream(-1 = none) first four outputs\n')
        for seed, stream, sub in [(0, 0, -1), (42, 0, -1), (42, 7, -1), (2024, 3, 5), (2**64 - 1, 1, 0)]:
            s = Stream(seed, stream)
            if sub >= 0:
                s = s.substream(sub)
            f.write(' '.join(str(x) for x in [seed, stream, sub] + [s.next() for _ in range(4)]) + '\n')
    with open(os.path.join(here, 'uniform_rationals.txt'), 'w') as f:
        f.write('# property_json|n|m|P as num/den\n')
        for prop, n, m in CASES:
            total = hits = 0
            for c in compositions(n, m):
                total += 1
                hits += holds(prop, c)
            frac = Fraction(hits, total)
            f.write(f'{json.dumps(prop, separators=(",", ":"))}|{n}|{m}|{frac.numerator}/{frac.denominator}\n')


if __name__ == '__main__':
    main()
