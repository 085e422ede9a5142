#!/usr/bin/env python3
"""Write the bundled synthetic corpora to disk.

The citation corpus goes out in the field-tagged format, the award corpus
in the line-delimited format. Both are deterministic for a given seed.
"""

import argparse
from pathlib import Path

from cocitemap.ingest import records_to_field_tagged, records_to_lines
from cocitemap.synthetic import synthetic_award_corpus, synthetic_citation_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="data", help="output directory")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    citation = synthetic_citation_corpus(seed=args.seed)
    (out / "citation_corpus.txt").write_text(
        records_to_field_tagged(citation), encoding="utf-8"
    )
    awards = synthetic_award_corpus(seed=args.seed + 4)
    (out / "award_corpus.jsonl").write_text(records_to_lines(awards), encoding="utf-8")
    print(f"wrote {len(citation)} citation records and {len(awards)} award records to {out}/")


if __name__ == "__main__":
    main()
