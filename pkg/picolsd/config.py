import json
from contextlib import AbstractContextManager
from pathlib import Path

from picolsd.errors import InvalidParam
from picolsd.logging import logger
from picolsd.utils import cached_property

DEFAULTS = {
    "solver.tol_gap": 1e-9,
    "solver.tol_feas": 1e-9,
    "solver.tol_slack": 1e-8,
    "solver.max_iter": 200,
    "solver.step_fraction": 0.98,
    "verify.samples": 10000,
    "verify.seed": 0,
    "batch.workers": 4,
}


def get_default_config():
    return dict(DEFAULTS)


def _parse_bool(text):
    return str(text).strip().lower() in ("1", "true", "yes", "on")


_PARSERS = {bool: _parse_bool, int: int, float: float, str: str}


class OverlayDict(dict):
    """A dict whose missing keys are looked up in `bottom`. Membership and
    iteration only see the keys stored in the dict itself."""

    def __init__(self, bottom=None, init=None):
        super().__init__(init or {})
        self.bottom = {} if bottom is None else bottom

    def __missing__(self, key):
        return self.bottom[key]

    # dict.get skips __missing__
    def get(self, key, default=None):
        try:
            return self[key]
        except KeyError:
            return default

    def __repr__(self):
        return "{} over {!r}".format(super().__repr__(), self.bottom)


def _marks_dirty(method):
    def wrapper(self, *args, **kwargs):
        self.dirty = True
        return method(self, *args, **kwargs)

    wrapper.__name__ = method.__name__
    return wrapper


class Config(OverlayDict):
    """A flat JSON settings file layered over defaults. Only keys that were
    set explicitly are written back, and only when something changed."""

    def __init__(self, path, bottom=None, init=None):
        super().__init__(bottom=bottom, init=init)
        self.path = Path(path)
        self.dirty = False
        self.load()

    __setitem__ = _marks_dirty(dict.__setitem__)
    __delitem__ = _marks_dirty(dict.__delitem__)
    clear = _marks_dirty(dict.clear)
    update = _marks_dirty(dict.update)
    pop = _marks_dirty(dict.pop)

    def coerce(self, key, value):
        """`value` converted to the type of the default for `key`. Values set
        through `picolsd config set` arrive as strings."""
        if key not in self.bottom:
            return value
        kind = type(self.bottom[key])
        if isinstance(value, kind):
            return value
        if kind is int and isinstance(value, float) and value.is_integer():
            return int(value)
        try:
            return _PARSERS[kind](value)
        except (KeyError, TypeError, ValueError):
            raise InvalidParam(
                "config value {}={!r} is not a valid {}".format(
                    key, value, kind.__name__
                )
            )

    def typed(self, key):
        return self.coerce(key, self[key])

    def load(self):
        logger.debug("Loading config from {}".format(self.path))
        try:
            raw = self.path.read_bytes()
        except FileNotFoundError:
            return False
        try:
            data = json.loads(raw)
        except ValueError as ex:
            raise InvalidParam("config file {} is corrupt: {}".format(self.path, ex))
        if not isinstance(data, dict):
            raise InvalidParam("config file {} must hold an object".format(self.path))
        dict.clear(self)
        dict.update(self, data)
        return True

    def save(self):
        logger.debug("Writing config to {}".format(self.path))
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(json.dumps(dict(self), indent=4, sort_keys=True))
        self.dirty = False


class ConfigManager(AbstractContextManager):
    """Opens config files under `root` once each and writes back the changed
    ones when the context exits."""

    def __init__(self, root):
        self.root = Path(root)
        self.configs = {}

    @cached_property
    def global_config(self):
        return self.open("config.json", bottom=get_default_config())

    def open(self, name, bottom=None):
        path = self.root / name
        if path not in self.configs:
            self.configs[path] = Config(path, bottom=bottom)
        return self.configs[path]

    def commit(self):
        dirty = [c for c in self.configs.values() if c.dirty]
        if dirty:
            logger.debug("Committing {} changed config file(s)".format(len(dirty)))
        for conf in dirty:
            conf.save()

    def __exit__(self, exc_type, exc_value, traceback):
        self.commit()
