from django.apps import AppConfig


class KpCheckerConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "apps.kp_checker"
    verbose_name = "Kneser-Poulsen Checker"
