import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'hecke_project.settings')
django.setup()
