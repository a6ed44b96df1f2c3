"""
Settings and configuration for seceki.

- Reads defaults from ``seceki.conf.xsettings``.
- Applies overrides from the module named by SECEKI_SETTINGS_MODULE, if set.
- Supports manual configuration at runtime via ``settings.configure``.
- Singleton pattern ensures only one configuration instance.

Usage:
    from seceki.conf import settings
    settings.THREADS
"""

from __future__ import annotations

import importlib
import os
import warnings

from seceki.conf import xsettings
from seceki.core.exceptions import ImproperlyConfigured
from seceki.utils.singleton import Singleton

ENVIRONMENT_VARIABLE = "SECEKI_SETTINGS_MODULE"


class Settings:
    """Holder for user configured settings."""

    SETTINGS_MODULE = None

    def __init__(self, settings_module=None):
        self.SETTINGS_MODULE = settings_module
        self._explicit_settings = set()

        for setting in dir(xsettings):
            if setting.isupper():
                setattr(self, setting, getattr(xsettings, setting))

        if not settings_module:
            return

        try:
            module = importlib.import_module(settings_module)
        except ImportError as err:
            raise ImproperlyConfigured(f"Cannot import settings module {settings_module!r}") from err

        numeric_settings = ("THREADS", "JITTER_SCALE", "CSV_PRECISION")

        for setting in dir(module):
            if setting.isupper():
                setting_value = getattr(module, setting)
                if setting in numeric_settings and not isinstance(setting_value, (int, float)):
                    warnings.warn(f"The {setting} setting must be a number.", stacklevel=2)
                    continue
                setattr(self, setting, setting_value)
                self._explicit_settings.add(setting)

    def is_overridden(self, setting):
        return setting in self._explicit_settings

    def __repr__(self):
        return f"<Settings '{self.SETTINGS_MODULE}'>"


class Configuration(Singleton):
    """
    seceki Configuration Singleton

    Loads settings lazily on first attribute access. Values are cached on the
    instance; ``configure`` and ``reset`` clear the cache.
    """

    def __init__(self):
        super().__init__()
        self._settings = None

    def _setup(self):
        self._settings = Settings(os.environ.get(ENVIRONMENT_VARIABLE))

    def __repr__(self):
        return f"<Configuration '{self._settings!r}'>"

    def __getattr__(self, name):
        if name.startswith("_"):
            raise AttributeError(name)
        if self._settings is None:
            self._setup()
        value = getattr(self._settings, name)
        self.__dict__[name] = value
        return value

    def __setattr__(self, name, value):
        if name == "_settings":
            self.__dict__.clear()
        else:
            self.__dict__.pop(name, None)
        super().__setattr__(name, value)

    @property
    def configured(self):
        """Return True if the settings have already been loaded."""
        return self._settings is not None

    def configure(self, **options):
        """
        Manually configure the settings at runtime.

        Args:
            **options: Setting names and values to override.
        """
        settings = Settings(os.environ.get(ENVIRONMENT_VARIABLE))
        for name, value in options.items():
            if not name.isupper():
                raise TypeError(f"Setting {name} must be uppercase.")
            setattr(settings, name, value)
        self._settings = settings

    def reset(self):
        """Drop cached settings; the next access reloads them."""
        self._settings = None


settings = Configuration()
