import numpy as np
import pytest

from ssvep import synth
from ssvep.io import load_manifest


@pytest.fixture(scope="session")
def small_session(tmp_path_factory):
    """Compact synthetic session: 2 participants x 4 freqs x 2 trials x 10 s."""
    out = tmp_path_factory.mktemp("small_session")
    manifest = synth.generate_session(
        trials_per_freq=2,
        participants=2,
        base_cfg=synth.SynthConfig(duration_s=10.0),
        seed=7,
        out_dir=out,
    )
    return load_manifest(manifest)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
