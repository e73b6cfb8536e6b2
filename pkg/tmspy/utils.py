# -*- coding: utf-8 -*-

""" TMSPy utility functions. """

from __future__ import annotations

import csv
import json

from collections.abc import Iterable

from tmspy import config, messages


class InputError(ValueError):
    """
    Malformed input file.

    Parameters:
        message : What is wrong.
        line : The one-based line number, if known.
    """
    def __init__(self, message: str, line: int = None):
        self.line = line
        super().__init__(
            message if line is None else "line {}: {}".format(line, message))


def factory_name(cls: type) -> str:
    """
    Returns a string describing a TMSPy class.

    Example
    -------
    >>> from tmspy.jpa import JpaParams
    >>> assert factory_name(JpaParams) == "jpa.JpaParams"
    >>> assert factory_name(float) == "builtins.float"
    """
    return "{}.{}".format(
        cls.__module__.removeprefix("tmspy."), cls.__name__)


def assert_isinstance(object, cls: type | tuple[type, ...]):
    """ Raise ``TypeError`` if ``object`` is not instance of ``cls``. """
    classes = cls if isinstance(cls, tuple) else (cls, )
    cls_name = ' | '.join(map(factory_name, classes))
    if not any(isinstance(object, cls) for cls in classes):
        raise TypeError(messages.TYPE_ERROR.format(
            cls_name, factory_name(type(object))))


def from_tree(tree: dict):
    """
    Import TMSPy and decode a serialised object.

    Parameters:
        tree : The serialisation of a TMSPy object.

    Example
    -------
    >>> tree = {'factory': 'jpa.JpaParams', 'r': 0.5, 'n': 0.1, 'phi': 0.0}
    >>> from tmspy.jpa import JpaParams
    >>> assert from_tree(tree) == JpaParams(0.5, 0.1)
    """
    *modules, factory = tree['factory'].split('.')
    import tmspy
    module = tmspy
    for attr in modules:
        module = getattr(module, attr)
    return getattr(module, factory).from_tree(tree)


def dumps(obj, **kwargs) -> str:
    """
    Serialise a TMSPy object as JSON.

    Parameters:
        obj : The TMSPy object to serialise.
        kwargs : Passed to ``json.dumps``.

    Example
    -------
    >>> from tmspy.dephasing import FilterSpec
    >>> print(dumps(FilterSpec(2.5e6)))
    {"factory": "dephasing.FilterSpec", "omega": 2500000.0}
    """
    return json.dumps(obj.to_tree(), **kwargs)


def loads(raw: str):
    """
    Loads a serialised TMSPy object.

    Example
    -------
    >>> raw = '{"factory": "dephasing.FilterSpec", "omega": 2500000.0}'
    >>> assert dumps(loads(raw)) == raw
    """
    obj = json.loads(raw)
    if isinstance(obj, list):
        return [from_tree(o) for o in obj]
    return from_tree(obj)


def format_float(x: float, precision: int = None) -> str:
    """
    Locale-independent repr of a float with a fixed number of significant
    digits, enough to round-trip a double by default.

    Example
    -------
    >>> format_float(0.1)
    '0.10000000000000001'
    >>> format_float(-0.0), format_float(2.0)
    ('-0', '2')
    """
    return "{:.{}g}".format(float(x), precision or config.CSV_PRECISION)


def write_csv(file, header: Iterable[str], rows: Iterable[Iterable[float]]):
    """
    Write numeric rows as CSV with LF line endings.

    Parameters:
        file : A path or an open text file.
        header : The column names.
        rows : The numeric rows, formatted with :func:`format_float`.

    Example
    -------
    >>> import io
    >>> buffer = io.StringIO()
    >>> write_csv(buffer, ["tau_s", "nk"], [(0, 1.5), (1e-6, 0.25)])
    >>> print(buffer.getvalue(), end='')
    tau_s,nk
    0,1.5
    9.9999999999999995e-07,0.25
    """
    if isinstance(file, str):
        with open(file, 'w', newline='', encoding='ascii') as opened:
            return write_csv(opened, header, rows)
    writer = csv.writer(file, lineterminator='\n')
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([format_float(x) for x in row])


def read_csv(file, headers: Iterable[tuple[str, ...]]):
    """
    Read a numeric CSV file whose header is one of ``headers``.

    Parameters:
        file : A path or an open text file.
        headers : The accepted headers, as tuples of column names.

    Returns:
        The header found and the list of float rows.

    Raises:
        InputError : With the offending line number.

    Example
    -------
    >>> import io
    >>> buffer = io.StringIO("tau_s,value\\n0,2\\n1e-6,1.5\\n")
    >>> read_csv(buffer, [("tau_s", "value")])
    (('tau_s', 'value'), [[0.0, 2.0], [1e-06, 1.5]])
    """
    if isinstance(file, str):
        with open(file, 'r', newline='', encoding='utf-8') as opened:
            return read_csv(opened, headers)
    headers = [tuple(header) for header in headers]
    reader = csv.reader(file)
    first = next(reader, None)
    header = tuple(name.strip() for name in first or ())
    if header not in headers:
        raise InputError(messages.MISSING_HEADER.format(
            " or ".join(map(",".join, headers)), ",".join(header)), line=1)
    rows = []
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        try:
            if len(row) != len(header):
                raise ValueError
            rows.append([float(x) for x in row])
        except ValueError:
            raise InputError(
                messages.MALFORMED_ROW.format(len(header)), line=line)
    return header, rows
