int df_interleaved_other() {
    int *p = malloc(4);
    int *r = malloc(4);
    free(p);
    free(r);
    free(p);
    return 0;
}
