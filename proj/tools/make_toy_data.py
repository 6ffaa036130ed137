#!/usr/bin/env python3
"""Regenerates the synthetic toy alignment in data/toy (fixed seed, no external data)."""
import random

rng = random.Random(20200101)
L = 240
BASES = "ACGT"


def mutate(seq, rate):
    return "".join(rng.choice(BASES) if rng.random() < rate else c for c in seq)


root = "".join(rng.choice(BASES) for _ in range(L))
rows = {}
for g in range(3):
    clade = mutate(root, 0.04)
    for s in range(2):
        sub = mutate(clade, 0.03)
        for t in range(2):
            rows[f"g{g + 1}_{2 * s + t + 1}"] = mutate(sub, 0.02)

# A few gaps and ambiguous bases so both gap modes matter.
for name in list(rows):
    seq = list(rows[name])
    for _ in range(3):
        seq[rng.randrange(L)] = "-"
    if rng.random() < 0.5:
        seq[rng.randrange(L)] = "N"
    rows[name] = "".join(seq)

with open("data/toy/toy12.fasta", "w") as f:
    for name, seq in rows.items():
        f.write(f">{name}\n")
        for i in range(0, L, 60):
            f.write(seq[i:i + 60] + "\n")

months3 = ["Jan-Mar", "Apr-Jun", "Jul-Sep"]
with open("data/toy/groups_3months.csv", "w") as f:
    f.write("taxon,group\n")
    for name in rows:
        f.write(f"{name},{months3[int(name[1]) - 1]}\n")

months4 = ["Jan-Mar", "Apr-May", "Jun-Jul", "Aug-Sep"]
with open("data/toy/groups_4months.csv", "w") as f:
    f.write("taxon,group\n")
    for i, name in enumerate(rows):
        f.write(f"{name},{months4[i % 4]}\n")
