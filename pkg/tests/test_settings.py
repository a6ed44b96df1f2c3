import io
import json
import logging

import pytest

from seceki.conf import ENVIRONMENT_VARIABLE
from seceki.conf import settings
from seceki.core.exceptions import ImproperlyConfigured
from seceki.utils.log import JSONFormatter
from seceki.utils.log import RequireDebugFalse
from seceki.utils.log import RequireDebugTrue
from seceki.utils.log import get_seceki_logger
from seceki.utils.log import set_level


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    monkeypatch.delenv(ENVIRONMENT_VARIABLE, raising=False)
    settings.reset()
    yield
    settings.reset()


@pytest.fixture
def settings_module(tmp_path, monkeypatch):
    def make(name, body):
        (tmp_path / f"{name}.py").write_text(body)
        monkeypatch.syspath_prepend(str(tmp_path))
        monkeypatch.setenv(ENVIRONMENT_VARIABLE, name)
        settings.reset()

    return make


class TestSettings:
    def test_defaults(self):
        assert settings.DEBUG is False
        assert settings.THREADS == 1
        assert settings.JITTER_SCALE == 1e-10
        assert settings.CSV_PRECISION == 17

    def test_configure_and_reset(self):
        settings.configure(THREADS=4)
        assert settings.THREADS == 4
        assert settings.configured
        settings.reset()
        assert not settings.configured
        assert settings.THREADS == 1

    def test_configure_rejects_lowercase(self):
        with pytest.raises(TypeError):
            settings.configure(threads=2)

    def test_module_overrides(self, settings_module):
        settings_module("seceki_override_settings", "THREADS = 3\nOUTPUT_DIR = 'elsewhere'\n")
        assert settings.THREADS == 3
        assert settings.OUTPUT_DIR == "elsewhere"
        assert settings.is_overridden("THREADS")
        assert not settings.is_overridden("DEBUG")

    def test_non_numeric_override_is_ignored(self, settings_module):
        settings_module("seceki_bad_threads_settings", "THREADS = 'many'\n")
        with pytest.warns(UserWarning, match="THREADS"):
            assert settings.THREADS == 1

    def test_missing_module(self, monkeypatch):
        monkeypatch.setenv(ENVIRONMENT_VARIABLE, "seceki_no_such_settings_module")
        with pytest.raises(ImproperlyConfigured) as info:
            settings.DEBUG
        assert info.value.exit_code == 2

    def test_private_names_are_not_settings(self):
        with pytest.raises(AttributeError):
            settings._hidden


class TestLogging:
    def test_logger_names(self):
        assert get_seceki_logger("seceki.eki.engine").name == "seceki.eki.engine"
        assert get_seceki_logger("harness").name == "seceki.harness"
        assert get_seceki_logger().name == "seceki"

    def test_single_root_handler(self):
        get_seceki_logger("a")
        get_seceki_logger("b")
        root = logging.getLogger("seceki")
        assert len(root.handlers) >= 1
        assert not root.propagate

    def test_set_level(self):
        root = logging.getLogger("seceki")
        before = root.level
        try:
            set_level("debug")
            assert root.level == logging.DEBUG
            set_level(logging.ERROR)
            assert root.level == logging.ERROR
        finally:
            root.setLevel(before)

    def test_debug_filters(self):
        record = logging.LogRecord("seceki", logging.INFO, __file__, 1, "msg", None, None)
        assert RequireDebugFalse().filter(record)
        assert not RequireDebugTrue().filter(record)
        settings.configure(DEBUG=True)
        assert RequireDebugTrue().filter(record)
        assert not RequireDebugFalse().filter(record)

    def test_debug_setting_selects_console_handler(self):
        handlers = {handler.get_name(): handler for handler in get_seceki_logger().handlers}
        consoles = [handlers["console"], handlers["debug_console"]]
        stream = io.StringIO()
        previous = [handler.setStream(stream) for handler in consoles]
        try:
            logger = get_seceki_logger("tests.console")
            logger.warning("plain")
            settings.configure(DEBUG=True)
            logger.warning("detailed")
        finally:
            for handler, old in zip(consoles, previous):
                if old is not None:
                    handler.setStream(old)
        plain, detailed = stream.getvalue().splitlines()
        assert "seceki.tests.console: plain" in plain
        assert "test_settings.py:" not in plain
        assert "test_settings.py:" in detailed
        assert "seceki.tests.console test_settings.py:" in detailed

    def test_json_formatter(self):
        record = logging.LogRecord("seceki.eki", logging.WARNING, __file__, 7, "jitter %s", ("1e-10",), None)
        data = json.loads(JSONFormatter().format(record))
        assert data["level"] == "WARNING"
        assert data["name"] == "seceki.eki"
        assert data["message"] == "jitter 1e-10"
        assert data["lineno"] == 7
