"""Synthetic signal corpora shared by the test modules.

Band-limited specs keep every component at or below 0.02 Hz on a 1 Hz base
rate, under the 0.025 Hz Nyquist limit of the coarsest factor (20).
"""

from telesample import SyntheticSpec, generate

DAY = 86400.0

BAND_LIMITED_COMPONENTS = [
    [(0.02, 1.0, 0.0), (0.013, 0.6, 1.0)],
    [(0.02, 0.8, 0.3), (0.011, 0.5, 2.0), (0.004, 1.5, 0.7)],
    [(0.015, 1.0, 1.2), (0.007, 2.0, 0.0)],
    [(0.019, 0.4, 2.5), (0.001, 3.0, 0.1)],
    [(0.002, 1.0, 0.0)],
]
BAND_LIMITED_OFFSETS = [2.0, 5.0, 3.0, 10.0, 1.0]


def band_limited_specs(duration=DAY, noise_std=0.01):
    return [
        SyntheticSpec(kind="sum_of_sines", duration=duration, rate=1.0,
                      components=tuple(c), offset=off, noise_std=noise_std, seed=i)
        for i, (c, off) in enumerate(zip(BAND_LIMITED_COMPONENTS, BAND_LIMITED_OFFSETS))
    ]


def band_limited_corpus(duration=DAY, noise_std=0.01):
    return [generate(s) for s in band_limited_specs(duration, noise_std)]


def well1_like(duration=3600.0, seed=0, noise_std=0.02):
    """Repetitive flow with sporadic spikes."""
    return generate(SyntheticSpec(
        kind="spike_train", duration=duration, rate=1.0,
        components=((0.01, 1.0, 0.0), (0.003, 0.5, 0.4)), offset=5.0,
        spike_period=97.0, spike_amplitude=8.0, spike_phase=13.0,
        noise_std=noise_std, seed=seed,
    ))


def well2_like(duration=3600.0, seed=0):
    """Level changes and a shut-in period, no repeating pattern."""
    return generate(SyntheticSpec(
        kind="step", duration=duration, rate=1.0,
        components=((0.004, 0.3, 0.0),), offset=4.0,
        steps=((600.0, 2.0), (1500.0, -1.0), (2900.0, 1.0)),
        dropouts=((2000.0, 2300.0),), noise_std=0.05, seed=seed,
    ))


def spike_train_corpus(duration=3600.0):
    return [well1_like(duration, seed) for seed in range(3)]


def aliased_sine(n=1000, freq=0.3, phase=0.5, offset=0.0):
    """A tone well above the 0.1 Hz Nyquist limit of factor 5."""
    return generate(SyntheticSpec(
        kind="sum_of_sines", duration=float(n), rate=1.0,
        components=((freq, 1.0, phase),), offset=offset, alias_test=True,
    ))


def full_corpus():
    return band_limited_corpus(duration=7200.0) + spike_train_corpus() + [well2_like(), aliased_sine()]
