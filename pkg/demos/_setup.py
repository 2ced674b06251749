"""Shared operating point for the demo scripts."""

from psea.channel import SystemParams, Topology, dbm_to_watts

TOPOLOGY = Topology(d_ab=20.0, d_ar=8.0, alpha=2.0)
N0 = dbm_to_watts(-80.0)


def params(p=10.0, sigma=1.0, lam=0.9):
    oa, ob = TOPOLOGY.gains()
    return SystemParams(p_a=p, p_b=p, n0=N0, n1=N0 / 2, n2=N0 / 2, eta=0.5, lam=lam,
                        m_a=2, m_b=2, omega_a=oa, omega_b=ob, sigma_a=sigma, sigma_b=sigma)


def save(fig, name):
    fig.tight_layout()
    fig.savefig(name, dpi=120)
    print(f"wrote {name}")
