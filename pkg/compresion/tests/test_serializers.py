# compresion/tests/test_serializers.py
import json
import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from ..errors import ConfigError
from ..experiments import apply_override, derive_seed, load_config, parse_value
from ..serializers import ExperimentConfigSerializer


class ExperimentConfigSerializerTests(SimpleTestCase):

    def validate(self, data):
        serializer = ExperimentConfigSerializer(data=data)
        return serializer.is_valid(), serializer

    def test_empty_document_gets_defaults(self):
        valid, serializer = self.validate({})
        self.assertTrue(valid, serializer.errors)
        data = serializer.validated_data
        self.assertEqual(data['version'], 1)
        self.assertEqual(data['compression']['method'], 'practise')
        self.assertEqual(data['compression']['radius'], 'all')
        self.assertEqual(data['compression']['match'], 'flops')
        self.assertEqual(data['finetune']['method'], 'feature_mimic')
        self.assertEqual(data['tiny']['m'], 50)
        self.assertEqual(data['network']['stages'], [[16, 3], [24, 3]])

    def test_unknown_keys_are_rejected(self):
        valid, serializer = self.validate({'semilla': 3})
        self.assertFalse(valid)
        self.assertIn('semilla', serializer.errors)
        valid, serializer = self.validate({'tiny': {'size': 3}})
        self.assertFalse(valid)
        self.assertIn('tiny', serializer.errors)

    def test_unsupported_version(self):
        valid, serializer = self.validate({'version': 2})
        self.assertFalse(valid)
        self.assertIn('version', serializer.errors)

    def test_practise_requires_feature_mimic(self):
        valid, serializer = self.validate({'finetune': {'method': 'bp'}})
        self.assertFalse(valid)
        self.assertIn('finetune', serializer.errors)
        valid, _ = self.validate({'compression': {'method': 'drop_first_k'}, 'finetune': {'method': 'bp'}})
        self.assertTrue(valid)

    def test_adaptor_scope_requires_feature_mimic(self):
        valid, _ = self.validate({
            'compression': {'method': 'drop_first_k'}, 'finetune': {'method': 'kd', 'scope': 'adaptors'},
        })
        self.assertFalse(valid)

    def test_radius_field(self):
        for radius in (0, 2, 'all'):
            valid, serializer = self.validate({'compression': {'radius': radius}})
            self.assertTrue(valid, serializer.errors)
            self.assertEqual(serializer.validated_data['compression']['radius'], radius)
        for radius in (-1, 'some', True, 1.5):
            valid, _ = self.validate({'compression': {'radius': radius}})
            self.assertFalse(valid)

    def test_range_checks(self):
        for document in (
            {'compression': {'ratio': 1.0}},
            {'finetune': {'temperature': 0.0}},
            {'theory': {'beta': -1.0}},
            {'theory': {'stability_epsilon': 0.5}},
            {'network': {'stages': [[0, 2]]}},
            {'tiny': {'m': 0}},
        ):
            valid, _ = self.validate(document)
            self.assertFalse(valid, document)


class OverrideTests(SimpleTestCase):

    def test_parse_value(self):
        self.assertEqual(parse_value('50'), 50)
        self.assertEqual(parse_value('true'), True)
        self.assertEqual(parse_value('[[8, 1]]'), [[8, 1]])
        self.assertEqual(parse_value('drop_first_k'), 'drop_first_k')

    def test_apply_override_creates_sections(self):
        document = apply_override({}, 'compression.k=3')
        self.assertEqual(document, {'compression': {'k': 3}})
        apply_override(document, 'compression.method=filter_prune')
        self.assertEqual(document['compression'], {'k': 3, 'method': 'filter_prune'})

    def test_apply_override_errors(self):
        with self.assertRaises(ConfigError):
            apply_override({}, 'compression.k')
        with self.assertRaises(ConfigError):
            apply_override({'seed': 1}, 'seed.value=2')


class SeedTests(SimpleTestCase):

    def test_derived_seeds_are_stable_and_distinct(self):
        self.assertEqual(derive_seed(0, 'teacher'), derive_seed(0, 'teacher'))
        self.assertNotEqual(derive_seed(0, 'teacher'), derive_seed(0, 'tiny'))
        self.assertNotEqual(derive_seed(0, 'teacher'), derive_seed(1, 'teacher'))


class LoadConfigTests(SimpleTestCase):

    def test_file_overrides_and_seed(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'exp.json'
            path.write_text(json.dumps({'seed': 4, 'tiny': {'m': 20}}))
            config = load_config(path, ['tiny.labeled=true'], seed=9)
        self.assertEqual(config['seed'], 9)
        self.assertEqual(config['tiny'], {'m': 20, 'labeled': True})
        self.assertIsInstance(config['compression'], dict)

    def test_invalid_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'exp.json'
            path.write_text('{seed: ')
            with self.assertRaises(ConfigError):
                load_config(path)

    def test_missing_file_is_an_io_error(self):
        with self.assertRaises(OSError):
            load_config('/nonexistent/exp.json')

    def test_invalid_value(self):
        with self.assertRaisesMessage(ConfigError, 'tiny'):
            load_config(overrides=['tiny.m=-5'])
