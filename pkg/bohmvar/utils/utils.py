import os
import sys
import csv
import math
import numbers

import numpy as np


def abspath(path):
    return os.path.abspath(os.path.expanduser(path))


def check_file_existence(path_to_file):
    return os.path.exists(path_to_file) and os.path.isfile(path_to_file)


def ensure_dir_existence(path_to_dir, check_emptiness=False):
    dirname = abspath(path_to_dir)
    if not os.path.exists(dirname):
        os.makedirs(dirname)
    if os.listdir(dirname) != [] and check_emptiness:
        raise RuntimeError(f"Directory {path_to_dir} is not empty\nYou can "
                           f"write:  rm -rf {dirname}\t to remove directory.")
    return dirname


class StdAndFileLogger(object):
    """
    Logger for printing output both in file and stdout (or stderr).
    """
    def __init__(self, log_filename, silent=False, stderr=False):
        self.terminal = sys.stdout
        self.stderror = sys.stderr
        self.use_stderr = stderr
        self.log_filename = log_filename
        self.silent = silent
        if not os.path.exists(self.log_filename):
            open(self.log_filename, 'w').close()

    def write(self, message):
        if not self.silent:
            stream = self.stderror if self.use_stderr else self.terminal
            stream.write(message)
            stream.flush()
        with open(self.log_filename, 'a') as fl:
            fl.write(message)

    def flush(self):
        pass


# Printing functions
def float_repr(value, precision=5):
    if value is None:
        return "None"
    if value != 0 and abs(value) < 10**(-precision):
        return f"{value:.2e}"
    return f"{round(value, precision)}"


class bcolors:
    HEADER = '\033[95m'
    OKBLUE = '\033[94m'
    OKGREEN = '\033[92m'
    WARNING = '\033[93m'
    FAIL = '\033[91m'
    ENDC = '\033[0m'
    BOLD = '\033[1m'
    UNDERLINE = '\033[4m'


def warning_format(message, category, filename, lineno, file=None, line=None):
    return f"{bcolors.WARNING}{category.__name__}: {message}"\
           f"{bcolors.ENDC} ({filename}:{lineno})\n"


# Descriptors
def parse_scalar(value):
    """
    Converts string to bool, None, int, float or complex when possible.
    """
    value = value.strip()
    low = value.lower()
    if low in ('true', 'false'):
        return low == 'true'
    if low == 'none':
        return None
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    try:
        return complex(value.replace(' ', ''))
    except ValueError:
        return value


def parse_descriptor(descriptor):
    """
    Splits descriptor of the form ``name:key=value,key=value`` into the name
    and dictionary of parsed values. Values are converted to int, float,
    complex or bool when possible.

    :param descriptor: Descriptor string, e.g. ``ho1d:n=2``.
    :type descriptor: str

    :raises ValueError: if descriptor is empty or some item has no ``=``.
    """
    if not isinstance(descriptor, str) or descriptor.strip() == "":
        raise ValueError(f"Descriptor should be a non-empty string, got "
                         f"{descriptor!r}.")
    name, _, rest = descriptor.strip().partition(':')
    params = {}
    if rest.strip() != "":
        for item in rest.split(','):
            key, sep, value = item.partition('=')
            if sep == "" or key.strip() == "":
                raise ValueError(f"Bad item `{item}` in descriptor "
                                 f"`{descriptor}`: expected key=value.")
            params[key.strip()] = parse_scalar(value)
    return name.strip(), params


def build_descriptor(name, params):
    """
    Inverse of :func:`parse_descriptor`.
    """
    if not params:
        return name
    items = ",".join(f"{key}={value}" for key, value in params.items())
    return f"{name}:{items}"


# Deterministic output
def format_float(value):
    """
    Representation of float with 17 significant digits.
    """
    return format(float(value), '.17g')


def _to_json_lines(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end_pad = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return "null" if obj is None else ("true" if obj else "false")
    if isinstance(obj, numbers.Integral):
        return str(int(obj))
    if isinstance(obj, numbers.Real):
        if not math.isfinite(obj):
            return "null"
        return format_float(obj)
    if isinstance(obj, str):
        return '"' + obj.replace('\\', '\\\\').replace('"', '\\"')\
            .replace('\n', '\\n') + '"'
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if len(obj) == 0:
            return "{}"
        items = [f'{pad}{_to_json_lines(str(key), indent, level + 1)}: '
                 f'{_to_json_lines(obj[key], indent, level + 1)}'
                 for key in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end_pad + "}"
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return "[]"
        items = [pad + _to_json_lines(x, indent, level + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + end_pad + "]"
    if hasattr(obj, 'to_dict'):
        return _to_json_lines(obj.to_dict(), indent, level)
    raise TypeError(f"Object of type {type(obj).__name__} could not be "
                    "serialized.")


def to_json(obj, indent=2):
    """
    Serializes ``obj`` to JSON string with sorted keys and floats printed
    with 17 significant digits. Non-finite floats become ``null``.
    """
    return _to_json_lines(obj, indent, 0) + "\n"


def write_json(filename, obj):
    with open(filename, 'w') as fl:
        fl.write(to_json(obj))
    return filename


def write_csv(filename, header, rows):
    """
    Writes rows into csv file. Floats are written with 17 significant
    digits.
    """
    def cell(value):
        if isinstance(value, (bool, np.bool_)) or value is None:
            return str(value)
        if isinstance(value, numbers.Integral):
            return str(int(value))
        if isinstance(value, numbers.Real):
            return format_float(value)
        return str(value)

    with open(filename, 'w', newline='') as fl:
        writer = csv.writer(fl)
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell(x) for x in row])
    return filename


# Numerics helpers
CHUNK_SIZE = 65536


def chunk_slices(n, chunk_size=CHUNK_SIZE):
    for start in range(0, n, chunk_size):
        yield slice(start, min(start + chunk_size, n))


def deterministic_sum(partials):
    """
    Sums partial (possibly complex) sums in a way independent of their
    order.
    """
    partials = list(partials)
    if len(partials) == 0:
        return 0.0
    if any(isinstance(x, complex) or np.iscomplexobj(x) for x in partials):
        return complex(math.fsum(np.real(x) for x in partials),
                       math.fsum(np.imag(x) for x in partials))
    return math.fsum(partials)


def seed_streams(seed, n):
    """
    Returns ``n`` independent numpy generators derived from ``seed``.
    """
    children = np.random.SeedSequence(seed).spawn(n)
    return [np.random.default_rng(child) for child in children]


def as_points(x, dim):
    """
    Transforms position or array of positions to the array of shape
    (N, dim). Returns the array and flag whether single point was given.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim == 1:
        if dim == 1 and arr.shape[0] != 1:
            return arr.reshape(-1, 1), False
        if arr.shape[0] != dim:
            raise ValueError(f"Position {x} has wrong dimension: expected "
                             f"{dim}.")
        return arr.reshape(1, dim), True
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise ValueError(f"Positions should have shape (N, {dim}), got "
                         f"{arr.shape}.")
    return arr, False
