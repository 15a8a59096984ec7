int uaf_alias() {
    int *p = malloc(4);
    int *q;
    q = p;
    free(p);
    int x = *q;
    return x;
}
