from typing import Iterable, Optional
import yaml

from utils import logger
from utils.errors import ConfigError

def flatten_dict_to_leaf(yaml: dict, prefix: Optional[str] = "", sep: Optional[str] = "."):
    """
    {"truncation": {"rel_tol": 1e-4}} -> [("truncation.rel_tol", 1e-4)]
    """

    res = []
    for k, v in yaml.items():
        if isinstance(v, dict):
            #
            if prefix == "":
                res.extend(flatten_dict_to_leaf(v, f"{k}"))
            else:
                res.extend(flatten_dict_to_leaf(v, f"{prefix}{sep}{k}"))
        else:
            #
            if prefix == "":
                res.append((f"{k}", v))
            else:
                res.append((f"{prefix}{sep}{k}", v))

    return res


def load_config_file(opts, known_keys: Optional[Iterable[str]] = None):
    """
    Read the YAML file named by opts.config and set every leaf value on opts
    under its dotted name, so that callers can do
    getattr(opts, "hmatrix.leaf_size", 16).

    Args:
        known_keys: dotted names accepted from the file, anything else is a
            ConfigError; every key is accepted when None
    """

    config_file_name = getattr(opts, "config", None)
    # If config file is None, then just return opts
    if config_file_name is None:
        return opts

    #
    try:
        with open(config_file_name, "r") as yaml_file:
            cfg = yaml.safe_load(yaml_file) or {}
    except (OSError, yaml.YAMLError) as ex:
        logger.warning(f"Error while loading config file: {config_file_name}")
        logger.warning(f"Error Message: {str(ex)}")
        raise ConfigError(f"Cannot read config file {config_file_name}: {ex}") from ex

    if not isinstance(cfg, dict):
        raise ConfigError(f"Config file {config_file_name} must hold a mapping")

    #
    leaves = flatten_dict_to_leaf(cfg)
    if known_keys is not None:
        known = set(known_keys)
        unknown = sorted(k for k, _ in leaves if k not in known)
        if unknown:
            raise ConfigError(f"Unknown keys in {config_file_name}: {', '.join(unknown)}")
    for k, v in leaves:
        setattr(opts, k, v)

    return opts


def override_from_args(opts, mapping: dict):
    """
    Copy command-line values onto dotted config keys, skipping flags the user
    did not give (None), so that YAML values survive unless overridden.

    Args:
        mapping (dict): argparse attribute name -> dotted config key
    """

    for arg_name, key in mapping.items():
        value = getattr(opts, arg_name, None)
        if value is not None:
            setattr(opts, key, value)
    return opts
