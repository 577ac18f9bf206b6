# compresion/serializers.py
from rest_framework import serializers

from .models import BlockScoreRecord, ExperimentRun

CONFIG_VERSION = 1

COMPRESSION_METHODS = ['practise', 'drop_first_k', 'filter_prune', 'curl_like_l2', 'curl_like_kl']
FINETUNE_METHODS = ['bp', 'kd', 'feature_mimic']
FINETUNE_SCOPES = ['all', 'adaptors']
LANDSCAPE_PAIRS = ['raw_block_zeroed', 'raw_filter_zeroed', 'pruned_finetuned', 'finetune_a_b']
FILTER_MATCHES = ['flops', 'latency']


class StrictSerializer(serializers.Serializer):
    """
    Rechaza claves desconocidas y rellena con {} las secciones anidadas
    ausentes para que reciban sus valores por defecto.
    """

    def to_internal_value(self, data):
        if not isinstance(data, dict):
            raise serializers.ValidationError({'non_field_errors': ['Se esperaba un objeto JSON']})
        unknown = sorted(set(data) - set(self.fields))
        if unknown:
            raise serializers.ValidationError({key: ['Clave desconocida'] for key in unknown})
        data = dict(data)
        for name, field in self.fields.items():
            if isinstance(field, serializers.BaseSerializer) and name not in data:
                data[name] = {}
        return super().to_internal_value(data)


class RadiusField(serializers.Field):
    """Entero >= 0 o 'all'."""

    def to_internal_value(self, data):
        if data == 'all':
            return data
        if isinstance(data, bool) or not isinstance(data, int) or data < 0:
            raise serializers.ValidationError("Debe ser un entero >= 0 o 'all'")
        return data

    def to_representation(self, value):
        return value


class DatasetSerializer(StrictSerializer):
    K = serializers.IntegerField(min_value=2, default=4)
    d = serializers.IntegerField(min_value=2, default=16)
    n_per_class = serializers.IntegerField(min_value=1, default=250)
    heldout_per_class = serializers.IntegerField(min_value=1, default=250)
    class_sep = serializers.FloatField(min_value=0.0, default=3.0)
    csv = serializers.CharField(required=False, allow_blank=True, default='')


class NetworkSerializer(StrictSerializer):
    stages = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(min_value=0), min_length=2, max_length=2),
        min_length=1,
        default=lambda: [[16, 3], [24, 3]],
    )

    def validate_stages(self, value):
        if any(width < 1 for width, _ in value):
            raise serializers.ValidationError("Los anchos de etapa deben ser positivos")
        return value


class TeacherSerializer(StrictSerializer):
    iters = serializers.IntegerField(min_value=0, default=2000)
    batch = serializers.IntegerField(min_value=1, default=64)
    lr = serializers.FloatField(min_value=0.0, default=0.02)


class TinySerializer(StrictSerializer):
    m = serializers.IntegerField(min_value=1, default=50)
    labeled = serializers.BooleanField(default=False)


class CompressionSerializer(StrictSerializer):
    method = serializers.ChoiceField(choices=COMPRESSION_METHODS, default='practise')
    k = serializers.IntegerField(min_value=0, default=2)
    ratio = serializers.FloatField(required=False, allow_null=True, default=None)
    match = serializers.ChoiceField(choices=FILTER_MATCHES, default='flops')
    radius = RadiusField(default='all')
    adaptor_iters = serializers.IntegerField(min_value=0, default=1000)
    adaptor_lr = serializers.FloatField(min_value=0.0, default=0.02)
    adaptor_batch = serializers.IntegerField(min_value=1, default=64)
    greedy = serializers.BooleanField(default=False)
    consistency = serializers.BooleanField(default=False)

    def validate_ratio(self, value):
        if value is not None and not 0 < value < 1:
            raise serializers.ValidationError("El ratio debe estar en (0, 1)")
        return value


class FinetuneSerializer(StrictSerializer):
    method = serializers.ChoiceField(choices=FINETUNE_METHODS, default='feature_mimic')
    iters = serializers.IntegerField(min_value=0, default=2000)
    batch = serializers.IntegerField(min_value=1, default=64)
    lr = serializers.FloatField(min_value=0.0, default=0.02)
    temperature = serializers.FloatField(default=4.0)
    scope = serializers.ChoiceField(choices=FINETUNE_SCOPES, default='all')

    def validate_temperature(self, value):
        if value <= 0:
            raise serializers.ValidationError("La temperatura debe ser positiva")
        return value


class LatencySerializer(StrictSerializer):
    trials = serializers.IntegerField(min_value=1, default=500)
    warmup = serializers.IntegerField(min_value=0, default=10)
    batch = serializers.IntegerField(min_value=1, default=64)
    strict = serializers.BooleanField(default=False)


class LandscapeSerializer(StrictSerializer):
    points = serializers.IntegerField(min_value=2, default=21)
    pairs = serializers.ListField(
        child=serializers.ChoiceField(choices=LANDSCAPE_PAIRS), default=lambda: list(LANDSCAPE_PAIRS),
    )
    block = serializers.CharField(required=False, allow_blank=True, default='')
    scratch_pair = serializers.BooleanField(default=False)
    data_thirst = serializers.BooleanField(default=True)


class TheorySerializer(StrictSerializer):
    claim1_trials = serializers.IntegerField(min_value=1, default=10000)
    claim2_trials = serializers.IntegerField(min_value=1, default=1000)
    gaussian_trials = serializers.IntegerField(min_value=1, default=1000)
    beta = serializers.FloatField(default=0.5)
    claim4_n = serializers.IntegerField(min_value=10, default=100)
    claim4_trials = serializers.IntegerField(min_value=500, default=2000)
    claim4_fit = serializers.ChoiceField(choices=['ols', 'sgd'], default='ols')
    claim5_ns = serializers.ListField(child=serializers.IntegerField(min_value=2), min_length=2,
                                      default=lambda: [50, 200, 800])
    claim5_temperatures = serializers.ListField(child=serializers.FloatField(), min_length=2,
                                                default=lambda: [1.0, 5.0])
    claim5_trials = serializers.IntegerField(min_value=2, default=500)
    stability_n = serializers.IntegerField(min_value=10, default=50)
    stability_epsilon = serializers.FloatField(default=1e-3)
    stability_trials = serializers.IntegerField(min_value=500, default=500)

    def validate_beta(self, value):
        if value <= 0:
            raise serializers.ValidationError("beta debe ser positivo")
        return value

    def validate_stability_epsilon(self, value):
        if not 0 < value <= 0.25:
            raise serializers.ValidationError("epsilon debe estar en (0, 0.25]")
        return value

    def validate_claim5_temperatures(self, value):
        if any(t <= 0 for t in value):
            raise serializers.ValidationError("Las temperaturas deben ser positivas")
        return value


class ExperimentConfigSerializer(StrictSerializer):
    version = serializers.IntegerField(default=CONFIG_VERSION)
    seed = serializers.IntegerField(min_value=0, default=0)
    output_dir = serializers.CharField(default='run')
    teacher_checkpoint = serializers.CharField(required=False, allow_blank=True, default='')
    dataset = DatasetSerializer()
    network = NetworkSerializer()
    teacher = TeacherSerializer()
    tiny = TinySerializer()
    compression = CompressionSerializer()
    finetune = FinetuneSerializer()
    latency = LatencySerializer()
    landscape = LandscapeSerializer()
    theory = TheorySerializer()

    def validate_version(self, value):
        if value != CONFIG_VERSION:
            raise serializers.ValidationError(f"Versión de configuración no soportada: {value}")
        return value

    def validate(self, attrs):
        compression, finetune = attrs['compression'], attrs['finetune']
        if compression['method'] == 'practise' and finetune['method'] != 'feature_mimic':
            raise serializers.ValidationError(
                {'finetune': ["El método 'practise' ajusta solo por imitación de features"]}
            )
        if finetune['scope'] == 'adaptors' and finetune['method'] != 'feature_mimic':
            raise serializers.ValidationError(
                {'finetune': ["scope='adaptors' solo es compatible con feature_mimic"]}
            )
        return attrs


class BlockScoreRecordSerializer(serializers.ModelSerializer):
    class Meta:
        model = BlockScoreRecord
        fields = [
            'stage', 'index', 'recoverability', 'tau', 'score',
            'latency_mean_ms', 'latency_std_ms', 'chosen',
        ]


class ExperimentRunSerializer(serializers.ModelSerializer):
    block_scores = BlockScoreRecordSerializer(many=True, read_only=True)
    status_display = serializers.CharField(source='get_status_display', read_only=True)

    class Meta:
        model = ExperimentRun
        fields = [
            'id', 'command', 'seed', 'status', 'status_display', 'output_dir',
            'config', 'metrics', 'error', 'started_at', 'finished_at', 'block_scores',
        ]
        read_only_fields = ['started_at', 'finished_at']
