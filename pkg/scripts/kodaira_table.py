"""Component groups of the split Kodaira fibres, computed from their dual graphs."""

import argparse
from dataclasses import dataclass

from neron.fibre import make_kodaira_fixture
from neron.jacobian import phi_geometric


@dataclass
class Config:
    max_n: int = 9


def symbols(cfg: Config):
    out = ["I0", "II", "III", "IV"]
    out += [f"I{n}" for n in range(2, cfg.max_n + 1)]
    out += [f"I{n}*" for n in range(0, cfg.max_n - 3)]
    return out + ["IV*", "III*", "II*"]


def main(cfg: Config):
    print(f"{'type':6s} {'components':>10s}  group")
    for s in symbols(cfg):
        f = make_kodaira_fixture(s)
        print(f"{s:6s} {f.n:10d}  {phi_geometric(f).group}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    main(Config(ap.parse_args().max_n))
