#!/usr/bin/env python3
# Copyright 2026 The subkit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exhaustive TER oracle and generator of the committed TER fixture.

The oracle searches every sequence reachable from the hypothesis by block
shifts (span of at most 10 tokens that occurs verbatim in the reference,
moved to any other position) and returns the minimum of
shifts + Levenshtein(sequence, reference).

    ter_oracle.py --generate tests/data/ter_fixture.tsv
"""

import argparse
import random
from collections import deque

MAX_SHIFT = 10


def levenshtein(a, b):
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i] + [0] * len(b)
        for j, y in enumerate(b, 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y))
        prev = cur
    return prev[-1]


def ref_spans(ref):
    out = set()
    for n in range(1, min(MAX_SHIFT, len(ref)) + 1):
        for i in range(len(ref) - n + 1):
            out.add(tuple(ref[i:i + n]))
    return out


def neighbours(cur, spans):
    n = len(cur)
    for length in range(1, min(MAX_SHIFT, n) + 1):
        for start in range(n - length + 1):
            span = cur[start:start + length]
            if span not in spans:
                continue
            rest = cur[:start] + cur[start + length:]
            for dest in range(len(rest) + 1):
                if dest == start:
                    continue
                yield rest[:dest] + span + rest[dest:]


def exhaustive_edits(hyp, ref):
    """Minimum shifts + edit distance over all shift sequences."""
    hyp, ref = tuple(hyp), tuple(ref)
    spans = ref_spans(ref)
    best = levenshtein(hyp, ref)
    seen = {hyp: 0}
    queue = deque([hyp])
    while queue:
        cur = queue.popleft()
        depth = seen[cur]
        best = min(best, depth + levenshtein(cur, ref))
        if depth + 1 >= best:
            continue
        for nxt in neighbours(cur, spans):
            if nxt not in seen:
                seen[nxt] = depth + 1
                queue.append(nxt)
    return best


def random_pair(rng):
    vocab = [chr(ord("a") + i) for i in range(rng.randint(2, 5))]
    ref = [rng.choice(vocab) for _ in range(rng.randint(1, 8))]
    style = rng.random()
    if style < 0.5:
        # Reordered reference with light noise.
        hyp = ref[:]
        rng.shuffle(hyp)
        for _ in range(rng.randint(0, 2)):
            op = rng.randint(0, 2)
            if op == 0 and hyp:
                hyp[rng.randrange(len(hyp))] = rng.choice(vocab)
            elif op == 1 and len(hyp) < 8:
                hyp.insert(rng.randint(0, len(hyp)), rng.choice(vocab))
            elif op == 2 and hyp:
                del hyp[rng.randrange(len(hyp))]
    else:
        hyp = [rng.choice(vocab) for _ in range(rng.randint(0, 8))]
    return hyp, ref


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--generate", required=True, help="output TSV path")
    parser.add_argument("--count", type=int, default=50)
    parser.add_argument("--seed", type=int, default=20260714)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    with open(args.generate, "w", encoding="utf-8") as out:
        out.write("# hyp\tref\texhaustive_edits\n")
        for _ in range(args.count):
            hyp, ref = random_pair(rng)
            out.write(f"{' '.join(hyp)}\t{' '.join(ref)}\t{exhaustive_edits(hyp, ref)}\n")


if __name__ == "__main__":
    main()
