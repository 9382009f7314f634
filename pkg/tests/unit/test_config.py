import pytest
from pydantic import ValidationError

from src.config import Bounds, Settings, parse_bounds_spec
from src.errors import PreconditionError


class TestBounds:
    def test_defaults(self):
        assert Bounds() == Bounds(enum=24, search=64, family=12)

    def test_rejects_non_positive(self):
        with pytest.raises(PreconditionError, match="family"):
            Bounds(family=0)

    def test_merged_skips_none(self):
        bounds = Bounds().merged({"enum": 8, "search": None, "family": None})
        assert bounds == Bounds(enum=8)


class TestParseBoundsSpec:
    def test_full(self):
        assert parse_bounds_spec("enum=10,search=20,family=5") == Bounds(10, 20, 5)

    def test_subset_and_spaces(self):
        assert parse_bounds_spec(" search = 30 ,") == Bounds(search=30)

    def test_on_top_of_base(self):
        assert parse_bounds_spec("enum=9", Bounds(family=3)) == Bounds(enum=9, family=3)

    @pytest.mark.parametrize("spec", ["depth=3", "enum", "enum=x", "enum=0"])
    def test_invalid(self, spec):
        with pytest.raises(PreconditionError):
            parse_bounds_spec(spec)


class TestSettings:
    def test_defaults(self):
        settings = Settings()
        assert settings.bounds == Bounds()
        assert settings.log_level == "WARNING"
        assert settings.workers == 1

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("ECDLAB_BOUNDS", "enum=12")
        monkeypatch.setenv("LOG_LEVEL", "debug")
        monkeypatch.setenv("ECDLAB_WORKERS", "4")
        settings = Settings()
        assert settings.bounds == Bounds(enum=12)
        assert settings.log_level == "DEBUG"
        assert settings.workers == 4

    def test_flags_override_environment(self, monkeypatch):
        monkeypatch.setenv("ECDLAB_BOUNDS", "enum=12,family=4")
        bounds = Settings().resolve_bounds(enum=20)
        assert bounds == Bounds(enum=20, family=4)

    def test_unknown_log_level(self, monkeypatch):
        monkeypatch.setenv("LOG_LEVEL", "chatty")
        with pytest.raises(ValidationError):
            Settings()

    def test_workers_positive(self, monkeypatch):
        monkeypatch.setenv("ECDLAB_WORKERS", "0")
        with pytest.raises(ValidationError):
            Settings()

    def test_keyword_construction(self):
        assert Settings(bounds_spec="family=2").bounds.family == 2
