#!/usr/bin/env python3
"""Fetch a MaxSAT Evaluation benchmark archive and unpack its WCNF files.

The corpus is large and never stored in the repository.  Pass the archive
URL of the track you want (tar, tar.gz, tar.xz or zip); compressed
``.wcnf.gz`` / ``.wcnf.xz`` members are decompressed on the way out.
Files land in ``<out>/<family>/`` where the family is the member's top
directory inside the archive, so the result can go straight to
``wpmaxsat bench --dir <out>``.
"""

import argparse
import gzip
import lzma
import shutil
import sys
import tarfile
import tempfile
import urllib.request
import zipfile
from pathlib import Path, PurePosixPath


def _members(archive: Path):
    if zipfile.is_zipfile(archive):
        with zipfile.ZipFile(archive) as zf:
            for name in zf.namelist():
                if not name.endswith("/"):
                    yield name, zf.open(name)
    else:
        with tarfile.open(archive) as tf:
            for m in tf:
                if m.isfile():
                    yield m.name, tf.extractfile(m)


def unpack(archive: Path, out: Path) -> int:
    count = 0
    for name, fh in _members(archive):
        parts = PurePosixPath(name).parts
        base = parts[-1]
        if base.endswith(".wcnf.gz"):
            stream, base = gzip.open(fh), base[:-3]
        elif base.endswith(".wcnf.xz"):
            stream, base = lzma.open(fh), base[:-3]
        elif base.endswith(".wcnf"):
            stream = fh
        else:
            continue
        family = parts[0] if len(parts) > 1 else "evaluation"
        dest = out / family / base
        dest.parent.mkdir(parents=True, exist_ok=True)
        with open(dest, "wb") as dst:
            shutil.copyfileobj(stream, dst)
        count += 1
    return count


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("url", help="archive URL (or a local path)")
    ap.add_argument("--out", default=str(Path(__file__).parent / "external"))
    args = ap.parse_args()
    out = Path(args.out)
    with tempfile.TemporaryDirectory() as tmp:
        local = Path(args.url)
        if not local.exists():
            local = Path(tmp) / "archive"
            print(f"downloading {args.url} ...", file=sys.stderr)
            urllib.request.urlretrieve(args.url, local)
        n = unpack(local, out)
    print(f"{n} WCNF files written under {out}")


if __name__ == "__main__":
    main()
