import functools

import click

from picolsd.errors import PicolsdError
from picolsd.session import Session
from picolsd.utils import die

pass_session = click.make_pass_decorator(Session)


def pass_session_attrib(attr):
    def decorator(fn):
        @pass_session
        @functools.wraps(fn)
        def wrapper(session, *a, **kwa):
            try:
                x = getattr(session, attr)
            except PicolsdError as e:
                die(str(e))
            fn(x, *a, **kwa)

        return wrapper

    return decorator


pass_global_config = pass_session_attrib("global_config")


def dies_on_error(fn):
    """Turn library errors into exit code 1 with the message on stderr."""

    @functools.wraps(fn)
    def wrapper(*a, **kwa):
        try:
            return fn(*a, **kwa)
        except PicolsdError as e:
            die(str(e))

    return wrapper


def samples_option(fn):
    return click.option(
        "--samples", type=click.IntRange(min=1), default=None, help="Witness samples."
    )(fn)


def seed_option(fn):
    return click.option(
        "--seed", type=int, default=None, help="Seed of the witness sampler."
    )(fn)
