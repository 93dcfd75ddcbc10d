from __future__ import annotations

from metachain.chain.spectral import convergence_table

from .command import Command

DEFAULT_CHAIN_LENGTHS = [4 * 2**i for i in range(8)]  # 4 .. 512


class PrefactorCommand(Command):
    help = "convergence of the prefactor c_N towards the infinite product V(mu)"

    def __init__(self, options) -> None:
        super().__init__(options)
        self.ns = list(options.n)
        self.mu = options.mu
        self.rows = []

    @classmethod
    def add_parser_arguments(cls, parser):
        parser.add_argument("--n", nargs="+", type=int, default=DEFAULT_CHAIN_LENGTHS, help="chain lengths")
        parser.add_argument("--mu", type=float, default=2.0, help="coupling ratio, gamma = mu * gamma_1^N")

    def run(self):
        self.rows = convergence_table(self.mu, self.ns)
        header = ("N", "c_N", "det_ratio", "V(mu)", "|c_N-V(mu)|", "N*|c_N-V(mu)|")
        print(f"{header[0]:>6} " + " ".join(f"{h:>22}" for h in header[1:]), file=self.out)  # noqa: T201
        for row in self.rows:
            values = " ".join(f"{v:>22.15g}" for v in row[1:])
            print(f"{row.n:>6} {values}", file=self.out)  # noqa: T201

    def summary(self):
        if not self.rows:
            return []
        last = self.rows[-1]
        return [f"c_N at N={last.n} is {last.c_n:.10g}, V({self.mu:g}) = {last.v_mu:.10g} (gap {last.gap:.3g})"]

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(n={self.ns}, mu={self.mu})"


__all__ = [
    "PrefactorCommand",
]
