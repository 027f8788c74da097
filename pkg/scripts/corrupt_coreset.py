"""Zero one weight of a coreset file, for negative certification tests.

    python3 scripts/corrupt_coreset.py coreset.json bad.json [--index i]

By default the heaviest entry is zeroed, which removes the most mass.
"""

import argparse
import json

from kzcoreset.io import dumps


def corrupt(doc: dict, index: int | None = None) -> dict:
    entries = doc["entries"]
    if not entries:
        raise SystemExit("coreset has no entries")
    if index is None:
        index = max(range(len(entries)), key=lambda i: (entries[i]["weight"], -i))
    out = json.loads(json.dumps(doc))
    out["entries"][index]["weight"] = 0.0
    out.setdefault("provenance", {})["corrupted_entry"] = index
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("src")
    ap.add_argument("dst")
    ap.add_argument("--index", type=int)
    args = ap.parse_args()
    with open(args.src, encoding="utf-8") as fh:
        doc = json.load(fh)
    with open(args.dst, "w", encoding="utf-8") as fh:
        fh.write(dumps(corrupt(doc, args.index)))


if __name__ == "__main__":
    main()
