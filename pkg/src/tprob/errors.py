"""Exceptions shared across modules."""


class FragmentError(ValueError):
    """The term uses a constant the operation does not accept."""


class ResourceError(RuntimeError):
    """An exploration exceeded its node cap."""


def require_fragment(t, forbidden: set[str], what: str) -> None:
    from .syntax import constants_in

    bad = sorted(constants_in(t) & forbidden)
    if bad:
        raise FragmentError(f"{what} does not accept terms containing {', '.join(bad)}")
