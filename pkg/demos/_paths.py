from pathlib import Path

CHANNELS = Path(__file__).resolve().parent.parent / "channels"


def channel_path(name: str) -> Path:
    return CHANNELS / name
