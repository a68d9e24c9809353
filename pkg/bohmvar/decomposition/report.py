import copy

TERMS = ['mean', 'var_q', 'var_b', 'q_term', 'deficit']


class DecompositionReport(object):
    """
    Class for keeping the variance decomposition of one observable.

    :param mean: Expectation E[a_w] = <A>.
    :param var_q: Quantum variance.
    :param var_b: Bohmian ensemble variance of a_w.
    :param q_term: Quantum fluctuation term Q_A.
    :param deficit: Multi-component deficit D_A, 0 for scalar states.
    :param tol_identity: Absolute tolerance of residual.
    :param h6: Integrability verdict for the operator order, True for
               nodeless states.
    :param method: Metadata of the computation (scheme, operator, state).
    :param errors: Quadrature error estimates per term.
    :param convergence: Exclusion reports per singular term.
    :param mc: Monte Carlo route of var_b (dict) or None.
    :param spin_ledger: Verdicts of spin ledger for spinor states or None.
    """
    def __init__(self, mean, var_q, var_b, q_term, deficit, tol_identity,
                 h6=True, method=None, errors=None, convergence=None,
                 mc=None, spin_ledger=None):
        self.mean = float(mean)
        self.var_q = float(var_q)
        self.var_b = float(var_b)
        self.q_term = float(q_term)
        self.deficit = float(deficit)
        self.residual = self.var_q - self.var_b - self.q_term - self.deficit
        self.tol_identity = float(tol_identity)
        self.h6 = h6
        self.method = copy.deepcopy(method or {})
        self.errors = copy.deepcopy(errors or {})
        self.convergence = copy.deepcopy(convergence or {})
        self.mc = copy.deepcopy(mc)
        self.spin_ledger = copy.deepcopy(spin_ledger)

    @property
    def identity_holds(self):
        return bool(abs(self.residual) <= self.tol_identity)

    @property
    def diverging(self):
        return any(conv.diverging for conv in self.convergence.values())

    @property
    def converged(self):
        return all(conv.converged for conv in self.convergence.values())

    def to_dict(self):
        result = {term: getattr(self, term) for term in TERMS}
        result.update({
            'residual': self.residual,
            'tol_identity': self.tol_identity,
            'identity_holds': self.identity_holds,
            'h6': self.h6,
            'method': self.method,
            'errors': self.errors,
            'convergence': {key: conv.to_dict()
                            for key, conv in self.convergence.items()},
            'diverging': self.diverging,
        })
        if self.mc is not None:
            result['mc'] = self.mc
        if self.spin_ledger is not None:
            result['spin_ledger'] = self.spin_ledger
        return result

    def csv_row(self):
        return [self.mean, self.var_q, self.var_b, self.q_term, self.deficit,
                self.residual, self.h6, self.diverging]

    @staticmethod
    def csv_header():
        return TERMS + ['residual', 'h6', 'diverging']

    def __repr__(self):
        values = ", ".join(f"{term}={getattr(self, term)}"
                           for term in TERMS + ['residual'])
        return f"DecompositionReport({values})"

    def __str__(self):
        width = max(len(term) for term in TERMS + ['residual'])
        lines = [f"{term:<{width}}\t{getattr(self, term): .12g}"
                 for term in TERMS + ['residual']]
        lines.append(f"{'h6':<{width}}\t{self.h6}")
        status = 'holds' if self.identity_holds else 'fails'
        lines.append(f"Identity {status} with tolerance {self.tol_identity}")
        return "\n".join(lines)

