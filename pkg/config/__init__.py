from .settings import APP_NAME, APP_VERSION, Settings, get_settings

__all__ = ["APP_NAME", "APP_VERSION", "Settings", "get_settings"]
