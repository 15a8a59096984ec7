int leak_nested_branch(int a, int b) {
    int *p = malloc(4);
    if (a) {
        if (b) {
            free(p);
        }
    }
    return 0;
}
