from .settings_storage import SettingsStorage, key_to_attr,\
    attr_to_key  # NOQA
from .arg_parser import version, usage, ArgParser, get_settings,\
    get_parser, SUPPORT_STRING  # NOQA
from . import settings  # NOQA
from . import settings_storage  # NOQA
from . import arg_parser  # NOQA
