# Main options. Task, state, operators and output.
task = 'decompose'
state = 'ho1d:n=0'
op = 'momentum'
output_directory = None
seed = 0
workers = 1
silence = False

# Quadrature
quad_points = 16
quad_rule = None  # chosen for the state: gauss or spherical
quad_panel = 1.0
quad_eps0 = 1e-3
quad_eps_ratio = 0.5
quad_eps_count = 13
quad_tail = 1e-12
quad_tol_conv = 1e-6

# Identity check
tol_identity = 1e-6

# Monte Carlo
mc_enabled = False
mc_n = 100000
mc_seed = None  # seed is used if None
mc_step = None
mc_burn_in = 10000
mc_thin = 5
mc_chains = 16

# Nodal diagnostics
nodal_resolution = None
nodal_radii = [0.1, 0.05, 0.025]
nodal_samples = 200000
nodal_orders = [1, 2]

# Trajectories
traj_n = 1000
traj_horizon = None  # characteristic time of the state
traj_dt = None  # 1e-3 of characteristic time
traj_records = 21
traj_x0 = None  # single path from this position if set

# Sweep
sweep_param = 'n'
sweep_values = None
sweep_param2 = None
sweep_values2 = None

# Pointwise check
pointwise_n = 1000

# Additional constants
TASKS = ['decompose', 'pointwise-check', 'nodal', 'trajectories',
         'uncertainty', 'qp-relation', 'sweep']
RULES = ['gauss', 'midpoint', 'spherical']
