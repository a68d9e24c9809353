from .utils import abspath, check_file_existence  # NOQA
from .utils import ensure_dir_existence, StdAndFileLogger  # NOQA
from .utils import float_repr, bcolors, warning_format  # NOQA
from .utils import parse_descriptor, build_descriptor, parse_scalar  # NOQA
from .utils import format_float, to_json, write_json, write_csv  # NOQA
from .utils import chunk_slices, deterministic_sum, seed_streams  # NOQA
from .utils import as_points, CHUNK_SIZE  # NOQA
