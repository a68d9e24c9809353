from .trajectories import Path, TrajectoryEnsemble, integrate_trajectory,\
    propagate_ensemble, equivariance_stat, weak_value_series,\
    angular_momentum, write_paths, default_dt  # NOQA
