import os
import sys
import traceback

from ..cli import arg_parser
from ..cli.arg_parser import SUPPORT_STRING
from ..utils import StdAndFileLogger, bcolors
from .scenario_run import ScenarioRun, EXIT_OK, EXIT_CONFIG_ERROR


def job(settings):
    """
    Runs one scenario. Creates :class:`bohmvar.core.scenario_run.ScenarioRun`
    object and calls its :meth:`run` method.

    :param settings: Settings of the run.
    :type settings: :class:`bohmvar.cli.settings_storage.SettingsStorage`

    :returns: exit status.
    """
    try:
        return ScenarioRun(settings).run()
    except Exception:
        print(f"{bcolors.FAIL}Run failed due to following exception:"
              f"{bcolors.ENDC}", file=sys.stderr)
        print(traceback.format_exc(), file=sys.stderr)
        return EXIT_CONFIG_ERROR


def main(argv=None):
    """
    Main function that is called from command line. Parses settings, runs
    the task and returns exit status: 0 on success, 1 on configuration
    error, 2 if identity check failed and 3 if some exclusion sequence
    diverges.

    :param argv: Command-line arguments without the program name.
    """
    try:
        settings_storage, args = arg_parser.get_settings(argv)
    except (AttributeError, ValueError, RuntimeError, OSError) as e:
        print(f"{bcolors.FAIL}Configuration error: {e}{bcolors.ENDC}",
              file=sys.stderr)
        print(SUPPORT_STRING, file=sys.stderr)
        return EXIT_CONFIG_ERROR

    log_file = os.path.join(settings_storage.output_directory,
                            ScenarioRun.LOG_FILENAME)

    # Change output stream both to stdout and log file
    saved_stdout = sys.stdout
    saved_stderr = sys.stderr
    sys.stdout = StdAndFileLogger(log_file, settings_storage.silence)
    sys.stderr = StdAndFileLogger(log_file, stderr=True)

    try:
        print(f"{bcolors.OKGREEN}--Successful arguments parsing--"
              f"{bcolors.ENDC}\n")
        print(f"Task: {settings_storage.task}")
        print(f"State: {settings_storage.state}")
        print(f"Operators: {', '.join(settings_storage.operators)}")
        print(f"All output is saved in output directory: "
              f"{settings_storage.output_directory}\n")
        print(f"{bcolors.OKBLUE}--Start {settings_storage.task}--"
              f"{bcolors.ENDC}")
        status = job(settings_storage)
        if status == EXIT_OK:
            print(f"\n{bcolors.OKGREEN}--Finish {settings_storage.task}--"
                  f"{bcolors.ENDC}")
        else:
            print(f"\n{bcolors.WARNING}--Finish {settings_storage.task} with"
                  f" status {status}--{bcolors.ENDC}")
            print(SUPPORT_STRING)
    finally:
        sys.stdout = saved_stdout
        sys.stderr = saved_stderr
    return status


if __name__ == "__main__":
    sys.exit(main())
