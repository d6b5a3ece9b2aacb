import os
import sys
from pathlib import Path

from picolsd.logging import logger


def die(mesg, code=1):
    logger.error(mesg)
    sys.exit(code)


def state_files(path: Path):
    """JSON files directly inside `path`, sorted by file name."""
    return sorted(
        (Path(path) / f for f in os.listdir(path) if f.endswith(".json")),
        key=lambda p: p.name,
    )


class CachedProperty:
    def __init__(self, fn):
        self.fn = fn

    def __get__(self, obj, cls):
        if obj is None:
            return self
        value = obj.__dict__[self.fn.__name__] = self.fn(obj)
        return value


cached_property = CachedProperty
