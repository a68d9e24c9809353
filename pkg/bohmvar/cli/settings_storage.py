import numbers

import numpy as np
from ruamel.yaml import YAML

from . import settings
from ..quadrature import IntegrationScheme, EquilibriumSampler
from ..states import make_state
from ..utils import parse_scalar, abspath

SECTIONS = ['quad', 'mc', 'nodal', 'traj', 'sweep', 'pointwise']
ALIASES = {'out': 'output_directory',
           'tol.identity': 'tol_identity'}
MIN_INT_VALUES = {'quad_points': 16, 'quad_eps_count': 2, 'workers': 1,
                  'mc_n': 1, 'mc_thin': 1, 'mc_chains': 1, 'traj_n': 1,
                  'traj_records': 2, 'pointwise_n': 1, 'nodal_resolution': 4,
                  'nodal_samples': 1}

INT_ATTRS = ['seed', 'workers', 'quad_points', 'quad_eps_count', 'mc_n',
             'mc_seed', 'mc_burn_in', 'mc_thin', 'mc_chains',
             'nodal_resolution', 'nodal_samples', 'traj_n', 'traj_records',
             'pointwise_n']
FLOAT_ATTRS = ['quad_panel', 'quad_eps0', 'quad_tail', 'quad_tol_conv',
               'tol_identity', 'mc_step', 'traj_horizon', 'traj_dt']
PROBS_ATTRS = ['quad_eps_ratio']
BOOL_ATTRS = ['silence', 'mc_enabled']
STR_ATTRS = ['state', 'sweep_param', 'sweep_param2']
CHOICE_ATTRS = {'task': settings.TASKS, 'quad_rule': settings.RULES}
FLOAT_LIST_ATTRS = ['nodal_radii', 'traj_x0']
VALUE_LIST_ATTRS = ['sweep_values', 'sweep_values2']
INT_LIST_ATTRS = ['nodal_orders']
OP_ATTRS = ['op']
DIR_ATTRS = ['output_directory']
ALL_ATTRS = (INT_ATTRS + FLOAT_ATTRS + PROBS_ATTRS + BOOL_ATTRS + STR_ATTRS +
             list(CHOICE_ATTRS) + FLOAT_LIST_ATTRS + VALUE_LIST_ATTRS +
             INT_LIST_ATTRS + OP_ATTRS + DIR_ATTRS)


def key_to_attr(key):
    """
    Transforms key of config file or command line (``quad.points``) to the
    name of setting (``quad_points``).
    """
    key = str(key).strip().lower()
    key = ALIASES.get(key, key)
    return key.replace('.', '_').replace('-', '_')


def attr_to_key(name):
    """
    Inverse of :func:`key_to_attr` for names of settings.
    """
    section, _, rest = name.partition('_')
    if section in SECTIONS and rest:
        return f"{section}.{rest}"
    return name


def _as_list(name, value, cast):
    error = ValueError(f"Setting {name} ({value}) must be list of "
                       f"{cast.__name__}s.")
    if isinstance(value, str):
        value = [x for x in value.split(',') if x.strip() != '']
    if isinstance(value, numbers.Real) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, (list, tuple)):
        raise error
    result = []
    for x in value:
        if isinstance(x, str):
            x = parse_scalar(x)
        if (not isinstance(x, numbers.Real) or isinstance(x, bool) or
                (cast is int and int(x) != x)):
            raise error
        result.append(cast(x))
    return result


class SettingsStorage(object):
    """
    Class to hold all settings of a run. All default values of settings
    are defined in :mod:`bohmvar.cli.settings`.
    """
    def __setattr__(self, name, value):
        """
        Sets attribute after check of its type and domain. Strings (from
        command line) are converted to the type of setting.

        :param name: Name of attribute.
        :param value: Value of the attribute.

        :raises AttributeError: if setting is unknown.
        :raises ValueError: if value is bad.
        """
        if name not in ALL_ATTRS:
            raise AttributeError(f"Unknown setting {name}.")
        if isinstance(value, str) and value.strip().lower() == 'none':
            value = None
        if isinstance(value, np.ndarray):
            value = value.tolist()
        if value is None:
            if getattr(settings, name) is not None:
                raise ValueError(f"Setting {name} could not be None.")
            object.__setattr__(self, name, value)
            return

        if name in INT_ATTRS:
            if isinstance(value, str):
                value = parse_scalar(value)
            if isinstance(value, float) and value.is_integer():
                value = int(value)
            if (not isinstance(value, numbers.Integral) or
                    isinstance(value, bool)):
                raise ValueError(f"Setting {name} ({value}) must be integer.")
            minimum = MIN_INT_VALUES.get(name, 0)
            if value < minimum:
                raise ValueError(f"Setting {name} ({value}) must be not less"
                                 f" than {minimum}.")
            value = int(value)
        elif name in FLOAT_ATTRS or name in PROBS_ATTRS:
            if isinstance(value, str):
                value = parse_scalar(value)
            if (not isinstance(value, numbers.Real) or
                    isinstance(value, bool)):
                raise ValueError(f"Setting {name} ({value}) must be float.")
            value = float(value)
            if name in PROBS_ATTRS and not 0 < value < 1:
                raise ValueError(f"Setting {name} ({value}) must be between 0"
                                 " and 1.")
            if name in FLOAT_ATTRS and value <= 0:
                raise ValueError(f"Setting {name} ({value}) must be "
                                 "positive.")
        elif name in BOOL_ATTRS:
            if isinstance(value, str):
                value = parse_scalar(value)
            if not isinstance(value, bool):
                raise ValueError(f"Setting {name} ({value}) must be boolean.")
        elif name in STR_ATTRS:
            if not isinstance(value, str) or value.strip() == "":
                raise ValueError(f"Setting {name} ({value}) must be "
                                 "non-empty string.")
            value = value.strip()
        elif name in CHOICE_ATTRS:
            if value not in CHOICE_ATTRS[name]:
                raise ValueError(f"Setting {name} ({value}) must be one of "
                                 f"{CHOICE_ATTRS[name]}.")
        elif name in FLOAT_LIST_ATTRS:
            value = _as_list(name, value, float)
        elif name in INT_LIST_ATTRS:
            value = _as_list(name, value, int)
            if any(x < 0 for x in value):
                raise ValueError(f"Setting {name} ({value}) must have "
                                 "non-negative elements.")
        elif name in VALUE_LIST_ATTRS:
            if isinstance(value, str):
                value = [parse_scalar(x) for x in value.split(',')
                         if x.strip() != '']
            if not isinstance(value, (list, tuple)) or len(value) == 0:
                raise ValueError(f"Setting {name} ({value}) must be "
                                 "non-empty list.")
            value = list(value)
        elif name in OP_ATTRS:
            if isinstance(value, str):
                value = [value]
            if (not isinstance(value, (list, tuple)) or len(value) == 0 or
                    not all(isinstance(x, str) and x.strip() != ""
                            for x in value)):
                raise ValueError(f"Setting {name} ({value}) must be operator"
                                 " descriptor or list of them.")
            value = [x.strip() for x in value]
            if len(value) == 1:
                value = value[0]
        elif name in DIR_ATTRS:
            if not isinstance(value, str):
                raise ValueError(f"Setting {name} ({value}) must be path.")
            value = abspath(value)
        object.__setattr__(self, name, value)

    def __getattr__(self, name):
        try:
            return object.__getattribute__(self, name)
        except AttributeError:
            if name in ALL_ATTRS:
                return getattr(settings, name)
            raise AttributeError(f"There is no such attribute {name} "
                                 "for SettingsStorage.")

    def __eq__(self, other):
        if not isinstance(other, self.__class__):
            return False
        return all(getattr(self, name) == getattr(other, name)
                   for name in ALL_ATTRS)

    def is_set(self, name):
        """
        Whether setting was set explicitly.
        """
        return name in self.__dict__

    @property
    def operators(self):
        """
        List of operator descriptors.
        """
        return [self.op] if isinstance(self.op, str) else list(self.op)

    def update_from_dict(self, dictionary):
        """
        Updates settings from dictionary with keys of config file.

        :raises AttributeError: for unknown keys.
        """
        for key, value in dictionary.items():
            attr_name = key_to_attr(key)
            if attr_name not in ALL_ATTRS:
                raise AttributeError(f"Unknown identifier: `{key}`.")
            self.__setattr__(attr_name, value)
        return self

    def update_from_file(self, config_file):
        """
        Updates settings by reading config file in YAML format with dotted
        keys (e.g. ``quad.points: 32``).

        :param config_file: File with settings.
        """
        if config_file is None:
            return self
        with open(config_file) as fl:
            loaded_dict = YAML(typ='safe').load(fl)
        if loaded_dict is None:
            return self
        if not isinstance(loaded_dict, dict):
            raise ValueError(f"Config file {config_file} should contain "
                             "mapping of settings.")
        return self.update_from_dict(loaded_dict)

    @staticmethod
    def from_file(config_file):
        """
        Creates new object with settings from file.
        """
        obj = SettingsStorage()
        return obj.update_from_file(config_file)

    def to_dict(self):
        """
        Fully resolved settings with keys of config file.
        """
        return {attr_to_key(name): getattr(self, name)
                for name in sorted(ALL_ATTRS)}

    def to_file(self, filename):
        """
        Saves settings in YAML format that could be read back by
        :meth:`from_file`.
        """
        values = self.to_dict()
        values.pop('output_directory')
        yaml = YAML(typ='safe')
        yaml.default_flow_style = False
        with open(filename, 'w') as fl:
            yaml.dump(values, fl)

    def get_state(self, **overrides):
        """
        State from descriptor with parameters ``overrides`` replaced.
        """
        return make_state(self.state, **overrides)

    def get_scheme(self, psi):
        return IntegrationScheme.for_state(
            psi, points=self.quad_points, rule=self.quad_rule,
            panel=self.quad_panel, eps0=self.quad_eps0,
            eps_ratio=self.quad_eps_ratio, eps_count=self.quad_eps_count,
            tail=self.quad_tail, tol_conv=self.quad_tol_conv)

    def get_sampler(self):
        seed = self.seed if self.mc_seed is None else self.mc_seed
        return EquilibriumSampler(seed=seed, step=self.mc_step,
                                  burn_in=self.mc_burn_in, thin=self.mc_thin,
                                  chains=self.mc_chains)
