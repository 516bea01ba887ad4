#!/usr/bin/env python3
"""Regenerates the fixture torrents with torf and records torf's infohashes.

Usage: python3 make_fixtures.py <output-dir>
"""
import os
import sys
import tempfile

import torf


def payload(path, size, seed):
    with open(path, "wb") as f:
        f.write(bytes((i * 31 + seed) % 251 for i in range(size)))


def main(out):
    rows = []
    with tempfile.TemporaryDirectory() as tmp:
        single = os.path.join(tmp, "dataset.bin")
        payload(single, 100_000, 7)
        t = torf.Torrent(path=single, piece_size=16384, private=False,
                         created_by=None, creation_date=None)
        t.generate()
        t.write(os.path.join(out, "single.torrent"), overwrite=True)
        rows.append(("single.torrent", t.infohash, t.name, t.size))

        multi = os.path.join(tmp, "climate data")
        os.makedirs(os.path.join(multi, "sub"))
        payload(os.path.join(multi, "a.csv"), 40_000, 1)
        payload(os.path.join(multi, "sub", "b.nc"), 70_001, 2)
        payload(os.path.join(multi, "readme.txt"), 513, 3)
        t = torf.Torrent(path=multi, piece_size=32768,
                         trackers=["http://tracker.example.org:6969/announce",
                                   "udp://tracker.example.net:1337/announce"],
                         comment="multi-file fixture", created_by="torf",
                         creation_date=1462060800)
        t.generate()
        t.write(os.path.join(out, "multi.torrent"), overwrite=True)
        rows.append(("multi.torrent", t.infohash, t.name, t.size))

        small = os.path.join(tmp, "v1.0 notes.txt")
        payload(small, 5, 9)
        t = torf.Torrent(path=small, piece_size=16384,
                         trackers=["http://tracker.example.org:6969/announce"],
                         webseeds=["http://mirror.example.org/v1.0%20notes.txt"],
                         private=True, source="FIXTURE", creation_date=1500000000)
        t.generate()
        t.write(os.path.join(out, "private.torrent"), overwrite=True)
        rows.append(("private.torrent", t.infohash, t.name, t.size))

    with open(os.path.join(out, "infohashes.txt"), "w") as f:
        for name, ih, dn, size in rows:
            f.write(f"{name} {ih} {size}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(__file__))
