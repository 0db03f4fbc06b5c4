# utils/seed_mapper.py
import hashlib

# Child seeds are the first 4 bytes (big-endian) of
# sha256("<master>:<kind>:<id1>:<id2>...") so any single cell can be replayed alone.
SEED_BYTES = 4


def split_seed(master: int, kind: str, *ids) -> int:
    key = ":".join([str(int(master)), kind, *(str(i) for i in ids)])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:SEED_BYTES], "big")


def instance_seed(master: int, problem: str, n: int, param: int, rep: int) -> int:
    return split_seed(master, f"instance-{problem}", n, param, rep)


def method_seed(instance: int, method: str) -> int:
    """Seed for one method run on one instance; independent of which other methods run."""
    return split_seed(instance, f"method-{method}")
