"""
Typed settings stored as text.

Provides the :class:`ConfigField` data descriptor, which exposes one entry of
its owner's ``store`` (a ``dict`` of raw strings, as read from a config file
or the command line) as a typed Python value. Helper functions
(:func:`IntField`, :func:`FloatField`, :func:`StrField`, :func:`BoolField`,
:func:`ListField`, :func:`ChoiceField`) are included for the common cases.

Examples
--------
Declare settings on a class owning a ``store``:

>>> class Settings:
...     seeds = IntField("seeds", default=1, minimum=1)
...     betas = ListField("betas", float, default="0.01,0.1,0.5")
...
...     def __init__(self):
...         self.store = {}
>>> settings = Settings()
>>> settings.betas
[0.01, 0.1, 0.5]
>>> settings.seeds = 10
>>> settings.store["seeds"]
'10'

Values are parsed on every read, so the store stays the single source of
truth and can be written back verbatim.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from typing import Any

from .errors import ArgumentError, ParseError
from .protocols import ConfigStoreOwner

_TRUE_WORDS = frozenset({"1", "true", "yes", "on"})
_FALSE_WORDS = frozenset({"0", "false", "no", "off"})


class ConfigField:
    """
    Read-write typed view on one key of an owner's ``store``.

    Attributes
    ----------
    key : str
        Key in the owner's ``store``.
    parse : callable
        Converts the raw string to the typed value. Raises :py:exc:`ValueError`
        on malformed text.
    format : callable
        Converts a typed value back to its raw string.
    default : str or None
        Raw value used when the key is absent. ``None`` means the setting is
        optional and reads as ``None``.
    validate : callable or None
        Called with the parsed value; raises :class:`~refradius.errors.ArgumentError`
        when the value is outside its domain.
    help : str
        One-line description used for command-line flags.

    Methods
    -------
    __get__(obj: ConfigStoreOwner, objtype: type | None = None) -> Any
        Parse and return the current value.
    __set__(obj: ConfigStoreOwner, value: Any) -> None
        Validate and store a new value.
    """

    def __init__(
        self,
        key: str,
        parse: Callable[[str], Any],
        format: Callable[[Any], str] = str,
        default: str | None = None,
        validate: Callable[[Any], None] | None = None,
        help: str = "",
    ) -> None:
        """
        Initialize the field.

        Parameters
        ----------
        key : str
            Key in the owner's ``store``. Must be a lowercase identifier.
        parse : callable
            Raw string to typed value.
        format : callable, optional
            Typed value to raw string. Defaults to :py:func:`str`.
        default : str, optional
            Raw default. ``None`` makes the setting optional.
        validate : callable, optional
            Domain check on the parsed value.
        help : str, optional
            Description for command-line flags.

        Raises
        ------
        :py:exc:`ValueError`
            If ``key`` is not a lowercase identifier.
        """
        if not key.isidentifier() or key != key.lower():
            raise ValueError(f"Setting key must be a lowercase identifier, got {key!r}")
        self.key = key
        self.parse = parse
        self.format = format
        self.default = default
        self.validate = validate
        self.help = help

    @property
    def flag(self) -> str:
        """Command-line flag of the setting, e.g. ``--grid-points``."""
        return "--" + self.key.replace("_", "-")

    def raw(self, obj: ConfigStoreOwner) -> str | None:
        """Raw string currently in effect for ``obj``."""
        return obj.store.get(self.key, self.default)

    def convert(self, text: str) -> Any:
        """
        Parse and validate a raw string.

        Raises
        ------
        ParseError
            If the text cannot be parsed.
        ArgumentError
            If the parsed value fails validation.
        """
        try:
            value = self.parse(text.strip())
        except (TypeError, ValueError) as e:
            if isinstance(e, ArgumentError):
                raise
            raise ParseError(f"Invalid value {text!r} for {self.key}: {e}") from e
        if self.validate is not None:
            self.validate(value)
        return value

    def __get__(self, obj: ConfigStoreOwner | None, objtype: type | None = None) -> Any:
        """
        Parse the current value of the setting.

        Parameters
        ----------
        obj : ConfigStoreOwner
            Instance holding the ``store``.
        objtype : type, optional
            Type of ``obj``.

        Returns
        -------
        Any
            Parsed value, ``None`` for an absent optional setting, or the
            descriptor itself when accessed on the class.
        """
        if obj is None:
            return self
        text = self.raw(obj)
        if text is None:
            return None
        return self.convert(text)

    def __set__(self, obj: ConfigStoreOwner, value: Any) -> None:
        """
        Store a new value.

        Strings are parsed first; any other value is formatted, then parsed
        back, so both go through the same validation.

        Raises
        ------
        ParseError, ArgumentError
            If the value is malformed or out of range.
        """
        text = value if isinstance(value, str) else self.format(value)
        self.convert(text)
        obj.store[self.key] = text.strip()


def _parse_bool(text: str) -> bool:
    word = text.lower()
    if word in _TRUE_WORDS:
        return True
    if word in _FALSE_WORDS:
        return False
    raise ValueError("expected one of true/false, yes/no, on/off, 1/0")


def _bounded(minimum: float | None, maximum: float | None, key: str) -> Callable[[Any], None] | None:
    if minimum is None and maximum is None:
        return None

    def check(value: float) -> None:
        if minimum is not None and value < minimum:
            raise ArgumentError(f"{key} must be >= {minimum}, got {value}")
        if maximum is not None and value > maximum:
            raise ArgumentError(f"{key} must be <= {maximum}, got {value}")

    return check


def IntField(  # noqa: N802
    key: str,
    default: int | None = None,
    minimum: int | None = None,
    maximum: int | None = None,
    help: str = "",
) -> ConfigField:
    """
    Create an integer setting.

    Parameters
    ----------
    key : str
        Setting name.
    default : int, optional
        Default value. ``None`` makes the setting optional.
    minimum, maximum : int, optional
        Inclusive bounds.
    help : str, optional
        Flag description.

    Returns
    -------
    ConfigField
        A new ``ConfigField`` instance.
    """
    return ConfigField(
        key,
        parse=int,
        default=None if default is None else str(default),
        validate=_bounded(minimum, maximum, key),
        help=help,
    )


def FloatField(  # noqa: N802
    key: str,
    default: float | None = None,
    minimum: float | None = None,
    maximum: float | None = None,
    help: str = "",
) -> ConfigField:
    """Create a real-valued setting; see :func:`IntField`."""
    return ConfigField(
        key,
        parse=float,
        format=repr,
        default=None if default is None else repr(float(default)),
        validate=_bounded(minimum, maximum, key),
        help=help,
    )


def StrField(key: str, default: str | None = None, help: str = "") -> ConfigField:  # noqa: N802
    """Create a free-text setting."""
    return ConfigField(key, parse=str, default=default, help=help)


def BoolField(key: str, default: bool = False, help: str = "") -> ConfigField:  # noqa: N802
    """Create a boolean setting accepting ``true/false``, ``yes/no``, ``on/off`` or ``1/0``."""
    return ConfigField(
        key,
        parse=_parse_bool,
        format=lambda value: "true" if value else "false",
        default="true" if default else "false",
        help=help,
    )


def ListField(  # noqa: N802
    key: str,
    item: Callable[[str], Any],
    default: str | None = None,
    minimum: float | None = None,
    help: str = "",
) -> ConfigField:
    """
    Create a comma-separated list setting.

    Parameters
    ----------
    key : str
        Setting name.
    item : callable
        Parser of one element, e.g. :py:class:`int`.
    default : str, optional
        Raw comma-separated default.
    minimum : float, optional
        Inclusive lower bound applied to every element.
    help : str, optional
        Flag description.

    Returns
    -------
    ConfigField
        Field reading as a non-empty ``list``.

    Raises
    ------
    ArgumentError
        On read or write, if the list is empty or an element is below ``minimum``.
    """
    element_check = _bounded(minimum, None, key)

    def parse(text: str) -> list[Any]:
        return [item(part.strip()) for part in text.split(",") if part.strip()]

    def validate(values: Sequence[Any]) -> None:
        if not values:
            raise ArgumentError(f"{key} must not be empty")
        if element_check is not None:
            for value in values:
                element_check(value)

    def format_list(values: Sequence[Any]) -> str:
        return ",".join(repr(value) if isinstance(value, float) else str(value) for value in values)

    return ConfigField(key, parse=parse, format=format_list, default=default, validate=validate, help=help)


def ChoiceField(  # noqa: N802
    key: str, choices: Sequence[str], default: str | None = None, help: str = ""
) -> ConfigField:
    """Create a setting restricted to ``choices`` (case-insensitive)."""
    allowed = tuple(choice.lower() for choice in choices)

    def validate(value: str) -> None:
        if value not in allowed:
            raise ArgumentError(f"{key} must be one of {', '.join(allowed)}, got {value!r}")

    return ConfigField(key, parse=str.lower, default=default, validate=validate, help=help)
