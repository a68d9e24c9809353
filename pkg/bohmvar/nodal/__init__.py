from .diagnostics import NodeCluster, ZeroOrderFit, VolumeGrowth,\
    NodalDiagnostics, locate_nodes, nodes_from_hint, estimate_zero_order,\
    volume_growth, zero_orders, operator_h6, h6_verdict, diagnose  # NOQA
