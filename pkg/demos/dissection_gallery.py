"""A gallery of Boltzmann dissections next to their dual looptrees.

Samples polygon dissections whose face weights follow the heavy-tailed
no-unary family, draws each one, and prints the metric comparison between
the dissection and the looptree of its dual tree.  The distortion stays
below the dual tree's height plus two on every draw.

Run from the repository root:

    python3 demos/dissection_gallery.py
"""

from __future__ import annotations

import pathlib

from looptrees import (
    dual_tree,
    gh_gap_check,
    looptree_svg,
    sample_boltzmann,
    stable_offspring,
    tree_stats,
)
from looptrees.experiments import stream

OUT = pathlib.Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

ALPHA = 1.3
LEAVES = (8, 25, 60, 120)

law = stable_offspring(ALPHA, variant="no-unary")
print(f"{'leaves':>7} {'sides':>6} {'chords':>7} {'height':>7} "
      f"{'distortion/2':>13} {'bound':>6}")
for i, n_leaves in enumerate(LEAVES):
    rng = stream(404, i)
    d = sample_boltzmann(law, n_leaves, rng)
    tree = dual_tree(d)
    stats = tree_stats(tree)
    ok, observed = gh_gap_check(d)
    assert ok, "height bound failed, which would be a real bug"
    print(f"{n_leaves:>7} {d.n_sides:>6} {d.chord_count:>7} "
          f"{stats.height:>7} {observed:>13.1f} {stats.height + 2:>6}")

    poly = OUT / f"dissection_{n_leaves}.svg"
    poly.write_text(d.to_svg(size=480, header_lines=[
        f"alpha={ALPHA} leaves={n_leaves}"]))
    loop = OUT / f"dissection_{n_leaves}_dual_loop.svg"
    loop.write_text(looptree_svg(tree, size=480))
    print(f"        drew {poly.name} and {loop.name}")

print()
print("faces of the dissection correspond to cycles of the dual looptree;")
print("a big face shows up as a big circle in the matching drawing.")
