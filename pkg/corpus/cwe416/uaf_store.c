int uaf_store() {
    int *p = malloc(4);
    free(p);
    *p = 1;
    return 0;
}
