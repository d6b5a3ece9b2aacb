import sys

from picolsd._version import __version__

MINPYVERSION = (3, 8, 0)

if sys.version_info < MINPYVERSION:
    print("picolsd, version {}".format(__version__))
    print(
        "picolsd requires at least Python version "
        "{}.{}.{}. You are using {}.{}.{}.".format(*MINPYVERSION, *sys.version_info)
    )
    sys.exit(1)


def main():
    from picolsd.cli import picolsd_cli

    picolsd_cli()
