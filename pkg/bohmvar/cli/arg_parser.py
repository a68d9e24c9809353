import argparse
import sys
import warnings

from . import settings
from .settings_storage import SettingsStorage, ALL_ATTRS, SECTIONS,\
    attr_to_key
from ..utils import ensure_dir_existence, check_file_existence

SUPPORT_STRING = "\nIn case of any questions or problems, please open an "\
                 "issue in the project repository.\n"

SECTION_OPTIONS = [name for name in ALL_ATTRS
                   if name.partition('_')[0] in SECTIONS] + ['tol_identity']
# command-line dests of main options
MAIN_OPTIONS = {'state': 'state', 'op': 'op', 'out': 'output_directory',
                'seed': 'seed', 'workers': 'workers'}


def version():
    '''
    Returns string with current version.
    '''
    try:
        from ..version import version
    except ImportError:
        version = "unknown"
    return "bohmvar version " + str(version) + "\n"


def usage():
    '''
    Returns usage of tool.
    '''
    return version() + "" \
        "Usage: \n\tbohmvar <task> [options]\n\n"\
        "Tasks:\n"\
        "\tdecompose\t\tvariance decomposition of operators.\n"\
        "\tpointwise-check\t\tpointwise identity at random points.\n"\
        "\tnodal\t\t\tnodal set diagnostics.\n"\
        "\ttrajectories\t\tequilibrium ensemble of Bohmian paths.\n"\
        "\tuncertainty\t\tuncertainty relation check.\n"\
        "\tqp-relation\t\tmomentum fluctuation and quantum potential.\n"\
        "\tsweep\t\t\tdecomposition over grid of state parameters.\n\n"\
        "Options:\n"\
        "\t--state <descriptor>\tstate, e.g. ho1d:n=2.\n"\
        "\t--op <descriptor>\toperator, e.g. momentum_1 (repeatable).\n"\
        "\t-o/--out <output_dir>\toutput directory.\n"\
        "\t-c/--config <file>\tYAML file with settings.\n"\
        "\t--seed <int>\t\tmaster seed.\n"\
        "\t--workers <int>\t\tnumber of processes.\n"\
        "\t--mc\t\t\tcross-check by Monte Carlo sampling.\n"\
        "\t--silence\t\tno output to stdout.\n"\
        "\t--<section>.<key> <value>\tany setting, e.g. --quad.points 32.\n"\
        "\n"\
        "\t-h/--help\t\tshow this help message and exit.\n"\
        "\t-v/--version\t\tshow version and exit.\n" + SUPPORT_STRING


class ArgParser(argparse.ArgumentParser):
    """
    Overrided class for argument parser.
    """
    def format_help(self):
        """
        Returns usage by calling :func:`usage`.
        """
        return usage()

    def error(self, message):
        """
        Prints usage and exits with status 1 of configuration errors.
        """
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        self.exit(1)


def _add_options(parser):
    parser.add_argument('--state', metavar="<descriptor>", default=None)
    parser.add_argument('--op', metavar="<descriptor>", action='append',
                        default=None)
    parser.add_argument('-o', '--out', metavar="<dir>", default=None)
    parser.add_argument('-c', '--config', metavar="<file>", default=None)
    parser.add_argument('--seed', metavar="<int>", default=None)
    parser.add_argument('--workers', metavar="<int>", default=None)
    parser.add_argument('--mc', action='store_true')
    parser.add_argument('--silence', action='store_true')
    parser.add_argument('-h', '--help', action='help',
                        default=argparse.SUPPRESS)
    for name in SECTION_OPTIONS:
        parser.add_argument(f"--{attr_to_key(name)}", dest=name,
                            metavar="<value>", default=None)


def get_parser():
    '''
    Parser with one subcommand for every task.
    '''
    parser = ArgParser(prog='bohmvar', add_help=False)
    parser.add_argument('-v', '--version', action='version',
                        version=version(), default=argparse.SUPPRESS)
    parser.add_argument('-h', '--help', action='help',
                        default=argparse.SUPPRESS)
    subparsers = parser.add_subparsers(dest='task', metavar='<task>')
    for task in settings.TASKS:
        _add_options(subparsers.add_parser(task, add_help=False))
    return parser


def _override(settings_storage, name, value, from_file):
    if (from_file and settings_storage.is_set(name) and
            getattr(settings_storage, name) is not None):
        old = getattr(settings_storage, name)
        new_storage = SettingsStorage()
        new_storage.__setattr__(name, value)
        if getattr(new_storage, name) != old:
            warnings.warn(f"Setting {attr_to_key(name)} in config file "
                          f"({old}) doesn't match to one from the command "
                          f"line ({getattr(new_storage, name)}). "
                          "The last is taken.")
    settings_storage.__setattr__(name, value)


def get_settings(argv=None):
    '''
    Parse args from command line and store them in settings storage.
    Settings from config file override defaults and command-line options
    override settings from config file.

    :param argv: Command-line arguments without the program name
                 (``sys.argv[1:]`` if None).

    :returns: tuple of settings storage and parsed arguments.
    '''
    if argv is None:
        argv = sys.argv[1:]
    parser = get_parser()

    # If not enough arguments
    if len(argv) == 0:
        parser.print_help()
        sys.exit(1)

    # 1. Parse arguments
    args = parser.parse_args(argv)
    if args.task is None:
        parser.print_help()
        sys.exit(1)

    # 2. Create Settings storage
    settings_storage = SettingsStorage()
    if args.config is not None:
        if not check_file_existence(args.config):
            raise ValueError(f"Config file {args.config} doesn't exist.")
        settings_storage.update_from_file(args.config)
    from_file = args.config is not None
    settings_storage.task = args.task

    for option, name in MAIN_OPTIONS.items():
        value = getattr(args, option)
        if value is not None:
            _override(settings_storage, name, value, from_file)
    if args.mc:
        settings_storage.mc_enabled = True
    if args.silence:
        settings_storage.silence = True
    for name in SECTION_OPTIONS:
        value = getattr(args, name)
        if value is not None:
            _override(settings_storage, name, value, from_file)

    # 3. Checks that we have got all required
    if settings_storage.output_directory is None:
        raise AttributeError("Output directory is required. It could be set "
                             "by -o/--out option or via config file.")
    if args.task == 'sweep' and settings_storage.sweep_values is None:
        raise AttributeError("Values of the swept parameter are required for"
                             " sweep. They could be set by --sweep.values.")
    if (settings_storage.sweep_param2 is None) !=\
            (settings_storage.sweep_values2 is None):
        raise AttributeError("Both sweep.param2 and sweep.values2 should be "
                             "set for two-parameter sweep.")

    ensure_dir_existence(settings_storage.output_directory,
                         check_emptiness=True)
    return settings_storage, args
