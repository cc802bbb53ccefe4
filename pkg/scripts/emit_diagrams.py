"""Dump DOT diagrams for every object in the bundled fixture corpus.

Usage:  python3 scripts/emit_diagrams.py [outdir]
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from rlsheaf import cli, dot


def main() -> None:
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "diagrams")
    outdir.mkdir(parents=True, exist_ok=True)
    ws = cli.load_workspace(None)
    count = 0
    for name, lat in sorted(ws.lattices.items()):
        (outdir / f"lattice_{name}.dot").write_text(dot.lattice_dot(name, lat) + "\n")
        count += 1
    for name, sp in sorted(ws.spaces.items()):
        (outdir / f"space_{name}.dot").write_text(dot.space_dot(name, sp) + "\n")
        count += 1
    for name in sorted(set(ws.bundles) | set(ws.rl_bundles)):
        b = ws.bundle_like(name, "emit")
        (outdir / f"bundle_{name}.dot").write_text(dot.bundle_dot(name, b) + "\n")
        count += 1
    print(f"wrote {count} DOT files to {outdir}/")


if __name__ == "__main__":
    main()
