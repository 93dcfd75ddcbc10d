from __future__ import annotations

from metachain.chain.potential import ChainParams
from metachain.chain.spectral import spectrum

from .command import Command, add_instance_arguments


class SpectrumCommand(Command):
    help = "closed form Hessian spectra at the saddle O and the minima I_+-"

    def __init__(self, options) -> None:
        super().__init__(options)
        self.n = options.n
        self.mu = options.mu
        self.rows = []

    @classmethod
    def add_parser_arguments(cls, parser):
        add_instance_arguments(parser, n=4)

    def run(self):
        p = ChainParams.create(self.n, self.mu, 1.0)
        self.rows = spectrum(p).rows()
        print(f"{'k':>5} {'gamma_k':>22} {'lambda_k':>22} {'nu_k':>22}", file=self.out)  # noqa: T201
        for k, gamma_k, lam, nu in self.rows:
            print(f"{k:>5} {gamma_k:>22.15g} {lam:>22.15g} {nu:>22.15g}", file=self.out)  # noqa: T201

    def summary(self):
        negative = sum(1 for row in self.rows if row[2] < 0)
        return [f"spectrum of n={self.n} mu={self.mu:g}: {negative} negative saddle direction(s)"]

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(n={self.n}, mu={self.mu})"


__all__ = [
    "SpectrumCommand",
]
