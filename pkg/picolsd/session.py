import os
from contextlib import ExitStack, contextmanager
from pathlib import Path

import click

from picolsd.config import Config, ConfigManager
from picolsd.logging import logger
from picolsd.sdp import SolverConfig
from picolsd.utils import cached_property

SOLVER_KEYS = ("tol_gap", "tol_feas", "tol_slack", "max_iter", "step_fraction")


def get_default_root():
    env = os.getenv("PICOLSD_ROOT")
    if env is not None:
        logger.debug("Using PICOLSD_ROOT")
        return Path(env).expanduser()
    return Path(click.get_app_dir("picolsd"))


class Session:
    root: Path
    exit_stack: ExitStack
    debug: bool

    @cached_property
    def config_manager(self) -> ConfigManager:
        return self.exit_stack.enter_context(ConfigManager(self.root))

    @cached_property
    def global_config(self) -> Config:
        return self.config_manager.global_config

    @classmethod
    @contextmanager
    def new(cls, *args, **kwargs):
        """Create a Session with the application root at the given location.
        This is a context manager and a Session instance is returned."""
        with ExitStack() as es:
            yield cls(es, *args, **kwargs)

    def __init__(self, exit_stack: ExitStack, root: Path = None, debug=False):
        self.exit_stack = exit_stack
        self.debug = debug
        if root is None:
            root = get_default_root()
        self.root = Path(root)
        logger.debug("Using application directory: {}".format(self.root))

    def setting(self, key, override=None):
        """Config value for `key`, unless a command-line override is given."""
        if override is not None:
            return override
        return self.global_config.typed(key)

    def solver_config(self, **overrides) -> SolverConfig:
        values = {
            k: self.setting("solver." + k, overrides.get(k)) for k in SOLVER_KEYS
        }
        return SolverConfig(**values)
