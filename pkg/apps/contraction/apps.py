from django.apps import AppConfig


class ContractionConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "apps.contraction"
    verbose_name = "Contractions"
