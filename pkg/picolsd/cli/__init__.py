from .batch import register_batch_cli
from .config import register_config_cli
from .decompose import register_decompose_cli
from .gen import register_gen_cli
from .main import picolsd_cli
from .verify import register_verify_cli

register_decompose_cli(picolsd_cli)
register_verify_cli(picolsd_cli)
register_gen_cli(picolsd_cli)
register_batch_cli(picolsd_cli)
register_config_cli(picolsd_cli)
