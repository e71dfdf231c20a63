import os
import warnings
from .exceptions import InvalidConfigError


class SettingDict(dict):

    def __repr__(self):
        return_string = ''
        printed_names = set()
        for category, name_list in setting_names_by_category.items():
            if len(name_list) > 0:
                return_string += category.title() + '\n'
            for name in name_list:
                printed_names.add(name)
                return_string += '\t{}: {}\n'.format(name, self[name])
            return_string += '\n'
        if len(set(self.keys()).difference(printed_names)) > 0:
            return_string += 'User Defined\n'
            for name in self.keys():
                if name not in printed_names:
                    return_string += '\t{}: {}\n'.format(name, self[name])
            return_string += '\n'
        return return_string

    def __setitem__(self, key, value):
        super(SettingDict, self).__setitem__(get_alias(key), value)

    def __getitem__(self, item):
        return super(SettingDict, self).__getitem__(get_alias(item))

    def __contains__(self, item):
        return super(SettingDict, self).__contains__(get_alias(item))


settings = None
setting_aliases = None
current_profile = None

default_setting_aliases = {
    'huber_prob': 'huber_tail_probability',
    'iters': 'chain_iterations',
    'r': 'auxiliary_coefficient',
}

default_settings = SettingDict({
    'beta_prior_mean': 0.,
    'beta_prior_variance': 1e3,
    'psi_prior_scale': 1.,
    'psi_prior_df_offset': 1,
    'sigma_prior_shape': 0.001,
    'sigma_prior_rate': 0.001,
    'alpha_prior_variance': 100.,
    'chain_iterations': 6000,
    'burnin_fraction': 0.5,
    'mh_step': 0.5,
    'mh_target_acceptance_low': 0.2,
    'mh_target_acceptance_high': 0.5,
    'gig_floor': 1e-12,
    'geweke_first': 0.1,
    'geweke_last': 0.5,
    'geweke_critical_value': 1.96,
    'optimizer_tolerance': 1e-6,
    'optimizer_max_iterations': 500,
    'optimizer_restarts': 3,
    'optimizer_stall_tolerance': 1e-4,
    'huber_tail_probability': 0.10,
    'robust_tolerance': 1e-6,
    'robust_max_iterations': 200,
    'auxiliary_coefficient': 0.8,
    'outlier_rate': 0.05,
    'outlier_shift': 5.,
    't_degrees_of_freedom': 5,
    'standardize_errors': 1,
    'replications': 500,
    'base_seed': 20240101,
})

setting_names_by_category = {
    'priors': [
        'beta_prior_mean',
        'beta_prior_variance',
        'psi_prior_scale',
        'psi_prior_df_offset',
        'sigma_prior_shape',
        'sigma_prior_rate',
        'alpha_prior_variance',
    ],

    'chain': [
        'chain_iterations',
        'burnin_fraction',
        'mh_step',
        'mh_target_acceptance_low',
        'mh_target_acceptance_high',
        'gig_floor',
        'geweke_first',
        'geweke_last',
        'geweke_critical_value',
    ],

    'optimizer': [
        'optimizer_tolerance',
        'optimizer_max_iterations',
        'optimizer_restarts',
        'optimizer_stall_tolerance',
    ],

    'robust': [
        'huber_tail_probability',
        'robust_tolerance',
        'robust_max_iterations',
    ],

    'datagen': [
        'auxiliary_coefficient',
        'outlier_rate',
        'outlier_shift',
        't_degrees_of_freedom',
        'standardize_errors',
    ],

    'simulation': [
        'replications',
        'base_seed',
    ],
}

# chain lengths; burn-in is always the first half
profile_iterations = {
    'test': 6000,
    'paper': 60000,
    'empirical': 150000,
}


def get_alias(name):
    n_iterations = 0
    while name in setting_aliases.keys() and n_iterations < 100:
        name = setting_aliases[name]
        n_iterations += 1
    if name in setting_aliases.keys():
        raise RuntimeError(
            'Circular aliases exist for setting name {}. '
            'Max iterations exceeded.'.format(name))
    return name


def set_setting(name, value):
    """
    Sets the value of a setting.

    Parameters
    ----------
    name : str
        The name of the setting, or one of its aliases.
    value : float or int
        The value to which the setting should be set. Booleans are stored
        as 0 or 1.
    """
    if isinstance(value, bool):
        value = int(value)
    if not isinstance(value, (int, float)):
        raise InvalidConfigError(
            'Setting {} must be numeric, got {}'.format(name, type(value)))
    settings[name] = value


def get_setting(name):
    """
    Retrieves the value of a setting.

    Parameters
    ----------
    name : str
        The name of the setting, or one of its aliases.

    Returns
    -------
    value : float or int
        The current value of the setting.
    """
    try:
        return settings[name]
    except KeyError:
        raise InvalidConfigError('No setting named {}'.format(name))


def settings_snapshot():
    """
    Returns
    -------
    snapshot : dict
        Every setting name, aliases resolved, mapped to its current value.
    """
    return dict(settings)


def apply_settings(snapshot):
    """
    Sets every setting in a mapping such as one made by settings_snapshot.

    Raises
    ------
    InvalidConfigError
        If a value is not numeric.
    """
    for name in sorted(snapshot.keys()):
        set_setting(name, snapshot[name])


def get_settings_string():
    """
    Returns
    -------
    settings_string : str
        A string listing all settings under each category, with their current
        values, followed by the active chain profile.
    """
    return repr(settings) + 'Profile\n\t{}\n'.format(current_profile)


def set_profile(name):
    """
    Selects a chain-length profile. 'test' runs 6,000 iterations, 'paper'
    runs 60,000 and 'empirical' 150,000; the first half is burn-in.
    """
    global current_profile
    if name not in profile_iterations:
        raise InvalidConfigError(
            'Unknown profile {}, expected one of {}'.format(
                name, ', '.join(sorted(profile_iterations.keys()))))
    settings['chain_iterations'] = profile_iterations[name]
    settings['burnin_fraction'] = 0.5
    current_profile = name


def get_profile():
    return current_profile


def profile_from_environment(default='test'):
    """Returns the profile named by the GCM_PROFILE environment variable."""
    name = os.environ.get('GCM_PROFILE', default).strip().lower() or default
    if name not in profile_iterations:
        warnings.warn(
            'GCM_PROFILE={} is not a known profile, using {}'.format(
                name, default))
        name = default
    return name


def reset_settings():
    """
    Reverts settings to their state when gcmiss was originally imported,
    removing user-defined settings and re-reading GCM_PROFILE.
    """
    global settings
    global setting_aliases
    setting_aliases = {}
    setting_aliases.update(default_setting_aliases)
    settings = SettingDict()
    settings.update(default_settings)
    set_profile(profile_from_environment())


reset_settings()
