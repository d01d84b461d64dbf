from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
SMOKE_CORPUS = FIXTURES / "smoke_corpus"
TINY_ENCODER = FIXTURES / "tiny_encoder"


@pytest.fixture(scope="session")
def trained_artifact(tmp_path_factory):
    """One five-epoch smoke run shared by the tests that inspect it."""
    from tlktrainer.config import TrainerConfig
    from tlktrainer.finetune import finetune

    out = tmp_path_factory.mktemp("artifact")
    config = TrainerConfig(checkpoint=str(TINY_ENCODER), batch_size=8)
    artifact, loss_log = finetune(config, SMOKE_CORPUS, "en", out / "model")
    return artifact, loss_log
